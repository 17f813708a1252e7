#include "simvec/tune.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "simvec/error.hpp"

namespace simvec {

std::string format_value(const ParamValue& v) {
  if (auto* d = std::get_if<double>(&v)) {
    std::ostringstream os;
    os.precision(17);
    os << *d;
    return os.str();
  }
  if (auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

// ---------------------------------------------------------------------------
// Search space

SearchSpace& SearchSpace::add(Dimension d) {
  auto fail = [&](const std::string& why) { throw Error("dimension '" + d.name + "': " + why); };
  if (d.name.empty()) throw Error("dimension with empty name");
  for (const auto& e : dims_)
    if (e.name == d.name) fail("duplicate name");
  if (d.kind == DimKind::kCategorical) {
    if (d.categories.empty()) fail("empty category list");
  } else {
    if (!(d.lo < d.hi)) fail("needs lo < hi");
    if (d.kind == DimKind::kLogReal && !(d.lo > 0.0)) fail("log-real bounds must be > 0");
  }
  dims_.push_back(std::move(d));
  return *this;
}

SearchSpace& SearchSpace::add_real(std::string name, double lo, double hi) {
  return add({std::move(name), DimKind::kReal, lo, hi, {}});
}
SearchSpace& SearchSpace::add_log_real(std::string name, double lo, double hi) {
  return add({std::move(name), DimKind::kLogReal, lo, hi, {}});
}
SearchSpace& SearchSpace::add_integer(std::string name, std::int64_t lo, std::int64_t hi) {
  return add({std::move(name), DimKind::kInteger, static_cast<double>(lo),
              static_cast<double>(hi), {}});
}
SearchSpace& SearchSpace::add_categorical(std::string name, std::vector<std::string> categories) {
  return add({std::move(name), DimKind::kCategorical, 0.0, 0.0, std::move(categories)});
}

std::size_t SearchSpace::encoded_size() const {
  std::size_t n = 0;
  for (const auto& d : dims_) n += d.kind == DimKind::kCategorical ? d.categories.size() : 1;
  return n;
}

std::size_t SearchSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (dims_[i].name == name) return i;
  throw Error("unknown dimension '" + std::string(name) + "'");
}

double SearchSpace::real(const Point& x, std::string_view name) const {
  const auto& v = x.at(index_of(name));
  if (auto* d = std::get_if<double>(&v)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw Error("dimension '" + std::string(name) + "' is categorical");
}

std::int64_t SearchSpace::integer(const Point& x, std::string_view name) const {
  const auto& v = x.at(index_of(name));
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw Error("dimension '" + std::string(name) + "' is not an integer");
}

const std::string& SearchSpace::category(const Point& x, std::string_view name) const {
  const auto& v = x.at(index_of(name));
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  throw Error("dimension '" + std::string(name) + "' is not categorical");
}

void SearchSpace::check(const Point& x) const {
  if (x.size() != dims_.size()) throw Error("point has the wrong number of dimensions");
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const auto& d = dims_[i];
    auto fail = [&](const std::string& why) {
      throw Error("dimension '" + d.name + "': " + why + " (" + format_value(x[i]) + ")");
    };
    switch (d.kind) {
      case DimKind::kReal:
      case DimKind::kLogReal: {
        auto* v = std::get_if<double>(&x[i]);
        if (!v) fail("expected a real");
        if (!(*v >= d.lo && *v <= d.hi)) fail("out of bounds");
        break;
      }
      case DimKind::kInteger: {
        auto* v = std::get_if<std::int64_t>(&x[i]);
        if (!v) fail("expected an integer");
        if (*v < d.lo || *v > d.hi) fail("out of bounds");
        break;
      }
      case DimKind::kCategorical: {
        auto* v = std::get_if<std::string>(&x[i]);
        if (!v) fail("expected a category");
        if (std::find(d.categories.begin(), d.categories.end(), *v) == d.categories.end())
          fail("unknown category");
        break;
      }
    }
  }
}

std::vector<double> SearchSpace::encode(const Point& x) const {
  check(x);
  std::vector<double> u;
  u.reserve(encoded_size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const auto& d = dims_[i];
    switch (d.kind) {
      case DimKind::kReal:
        u.push_back((std::get<double>(x[i]) - d.lo) / (d.hi - d.lo));
        break;
      case DimKind::kLogReal:
        u.push_back((std::log(std::get<double>(x[i])) - std::log(d.lo)) /
                    (std::log(d.hi) - std::log(d.lo)));
        break;
      case DimKind::kInteger:
        u.push_back((static_cast<double>(std::get<std::int64_t>(x[i])) - d.lo) / (d.hi - d.lo));
        break;
      case DimKind::kCategorical: {
        const auto& s = std::get<std::string>(x[i]);
        for (const auto& c : d.categories) u.push_back(c == s ? 1.0 : 0.0);
        break;
      }
    }
  }
  return u;
}

Point SearchSpace::decode(std::span<const double> u) const {
  if (u.size() != encoded_size()) throw Error("encoded point has the wrong size");
  Point x;
  x.reserve(dims_.size());
  std::size_t k = 0;
  for (const auto& d : dims_) {
    if (d.kind == DimKind::kCategorical) {
      std::size_t arg = 0;
      for (std::size_t c = 1; c < d.categories.size(); ++c)
        if (u[k + c] > u[k + arg]) arg = c;
      x.emplace_back(d.categories[arg]);
      k += d.categories.size();
      continue;
    }
    const double t = std::clamp(u[k++], 0.0, 1.0);
    switch (d.kind) {
      case DimKind::kReal:
        x.emplace_back(std::clamp(d.lo + t * (d.hi - d.lo), d.lo, d.hi));
        break;
      case DimKind::kLogReal:
        x.emplace_back(std::clamp(std::exp(std::log(d.lo) + t * (std::log(d.hi) - std::log(d.lo))),
                                  d.lo, d.hi));
        break;
      case DimKind::kInteger:
        x.emplace_back(static_cast<std::int64_t>(std::llround(d.lo + t * (d.hi - d.lo))));
        break;
      case DimKind::kCategorical:
        break;
    }
  }
  return x;
}

Point SearchSpace::from_unit(std::span<const double> per_dim) const {
  if (per_dim.size() != dims_.size()) throw Error("unit point has the wrong size");
  std::vector<double> u;
  u.reserve(encoded_size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const auto& d = dims_[i];
    const double t = std::clamp(per_dim[i], 0.0, 1.0);
    if (d.kind == DimKind::kCategorical) {
      const auto n = d.categories.size();
      const auto pick = std::min(n - 1, static_cast<std::size_t>(t * static_cast<double>(n)));
      for (std::size_t c = 0; c < n; ++c) u.push_back(c == pick ? 1.0 : 0.0);
    } else if (d.kind == DimKind::kInteger) {
      // Equal-width bins so every integer is equally likely.
      const auto n = static_cast<std::size_t>(d.hi - d.lo) + 1;
      const auto pick = std::min(n - 1, static_cast<std::size_t>(t * static_cast<double>(n)));
      u.push_back(static_cast<double>(pick) / static_cast<double>(n - 1));
    } else {
      u.push_back(t);
    }
  }
  return decode(u);
}

Point SearchSpace::sample(Rng& rng) const {
  std::vector<double> t(dims_.size());
  for (double& v : t) v = rng.uniform();
  return from_unit(t);
}

SearchSpace SearchSpace::parse(std::istream& in) {
  SearchSpace space;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name, kind;
    if (!(ls >> name)) continue;
    auto fail = [&](const std::string& why) {
      throw Error("space line " + std::to_string(n) + ": " + why);
    };
    if (!(ls >> kind)) fail("missing kind");
    if (kind == "categorical") {
      std::string list;
      if (!(ls >> list)) fail("missing categories");
      std::vector<std::string> cats;
      std::istringstream cs(list);
      for (std::string c; std::getline(cs, c, ',');)
        if (!c.empty()) cats.push_back(c);
      space.add_categorical(name, cats);
    } else {
      double lo = 0.0, hi = 0.0;
      if (!(ls >> lo >> hi)) fail("expected 'lo hi'");
      if (kind == "real") space.add_real(name, lo, hi);
      else if (kind == "log-real") space.add_log_real(name, lo, hi);
      else if (kind == "integer") {
        if (lo != std::floor(lo) || hi != std::floor(hi)) fail("integer bounds must be whole");
        space.add_integer(name, static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi));
      } else fail("unknown kind '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) fail("unexpected '" + extra + "'");
  }
  if (space.size() == 0) throw Error("empty search space");
  return space;
}

SearchSpace SearchSpace::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read search space '" + path + "'");
  return parse(in);
}

SearchSpace default_d2v_space() {
  SearchSpace s;
  s.add_categorical("dm", {"0", "1"})
      .add_categorical("hs", {"0", "1"})
      .add_integer("size", 100, 600)
      .add_integer("window", 1, 10)
      .add_log_real("sample", 1e-7, 1e-3)
      .add_integer("iter", 1, 10);
  return s;
}

SearchSpace default_lsi_space() {
  SearchSpace s;
  s.add_integer("num-topics", 50, 1000).add_integer("chunksize", 1000, 100000).add_real("decay", 0.5, 1.0);
  return s;
}

// ---------------------------------------------------------------------------
// Trial log

void TrialLog::append(Trial t) {
  if (!std::isfinite(t.y)) throw Error("trial value must be finite");
  trials_.push_back(std::move(t));
  if (trials_.back().y < trials_[best_].y) best_ = trials_.size() - 1;
}

const Trial& TrialLog::best() const {
  if (trials_.empty()) throw Error("empty trial log");
  return trials_[best_];
}

std::vector<double> TrialLog::best_so_far() const {
  std::vector<double> out;
  double b = std::numeric_limits<double>::infinity();
  for (const auto& t : trials_) out.push_back(b = std::min(b, t.y));
  return out;
}

void TrialLog::write_csv(const SearchSpace& space, std::ostream& out) const {
  for (const auto& d : space.dims()) out << d.name << ',';
  out << "y,best_so_far\n";
  auto best = best_so_far();
  for (std::size_t i = 0; i < trials_.size(); ++i) {
    for (const auto& v : trials_[i].x) out << format_value(v) << ',';
    out << format_value(trials_[i].y) << ',' << format_value(best[i]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Acquisition

double expected_improvement(double mean, double sigma, double y_best) {
  const double gain = y_best - mean;
  if (!(sigma > 0.0)) return std::max(0.0, gain);
  const double z = gain / sigma;
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  return std::max(0.0, gain * cdf + sigma * pdf);
}

double expected_improvement(std::span<const double> u, const GpPosterior& gp, double y_best) {
  auto p = gp.predict(u);
  return expected_improvement(p.mean, std::sqrt(p.variance), y_best);
}

namespace {

bool same_point(std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-12) return false;
  return true;
}

bool already_tried(const std::vector<std::vector<double>>& seen, std::span<const double> u) {
  return std::any_of(seen.begin(), seen.end(), [&](const auto& s) { return same_point(s, u); });
}

// Moves one non-categorical coordinate by a grid step until the point is new.
std::vector<double> perturb(const SearchSpace& space, std::vector<double> u,
                            const std::vector<std::vector<double>>& seen) {
  std::size_t k = 0;
  for (const auto& d : space.dims()) {
    if (d.kind == DimKind::kCategorical) {
      k += d.categories.size();
      continue;
    }
    const double step = d.kind == DimKind::kInteger ? 1.0 / (d.hi - d.lo) : 1e-3;
    for (double dir : {1.0, -1.0}) {
      auto v = u;
      v[k] = v[k] + dir * step;
      if (v[k] < 0.0 || v[k] > 1.0) continue;
      v = space.encode(space.decode(v));
      if (!already_tried(seen, v)) return v;
    }
    ++k;
  }
  return u;
}

}  // namespace

Suggestion suggest_next(const SearchSpace& space, const TrialLog& log, std::uint64_t seed,
                        const SuggestOptions& options) {
  Rng rng(seed);
  Suggestion out;
  std::vector<std::vector<double>> seen;
  for (const auto& t : log.trials()) seen.push_back(space.encode(t.x));

  const std::size_t n = log.size();
  const std::size_t dim = space.encoded_size();
  bool degenerate = n < 2;
  if (!degenerate) {
    const double y0 = log.trials()[0].y;
    degenerate = std::all_of(log.trials().begin(), log.trials().end(),
                             [&](const Trial& t) { return t.y == y0; });
  }
  if (degenerate) {
    out.random_fallback = true;
    out.x = space.sample(rng);
    return out;
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = seen[i][j];
    y(static_cast<Eigen::Index>(i)) = log.trials()[i].y;
  }
  GpOptions gopt = options.gp;
  gopt.seed = derive_seed(seed, "gp");
  const GpPosterior gp = GpPosterior::fit(x, y, gopt);
  const double y_best = log.best().y;
  if (!gp.prior_only()) out.hyper = gp.hyper();

  struct Scored {
    double ei;
    std::vector<double> u;
  };
  std::vector<Scored> cands;
  cands.reserve(static_cast<std::size_t>(options.candidates));
  for (int c = 0; c < options.candidates; ++c) {
    auto u = space.encode(space.sample(rng));
    cands.push_back({expected_improvement(u, gp, y_best), std::move(u)});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Scored& a, const Scored& b) { return a.ei > b.ei; });
  out.max_candidate_ei = cands.empty() ? 0.0 : cands.front().ei;

  Scored best = cands.empty() ? Scored{0.0, space.encode(space.sample(rng))} : cands.front();
  // Local refinement over the continuous coordinates; categorical blocks
  // stay as in the start point.
  std::vector<std::size_t> free;
  {
    std::size_t k = 0;
    for (const auto& d : space.dims()) {
      if (d.kind == DimKind::kCategorical) {
        k += d.categories.size();
      } else {
        free.push_back(k++);
      }
    }
  }
  const std::size_t refine = std::min<std::size_t>(static_cast<std::size_t>(options.refine), cands.size());
  for (std::size_t r = 0; r < refine && !free.empty(); ++r) {
    const auto base = cands[r].u;
    auto embed = [&](std::span<const double> t) {
      auto u = base;
      for (std::size_t i = 0; i < free.size(); ++i) u[free[i]] = std::clamp(t[i], 0.0, 1.0);
      return u;
    };
    std::vector<double> t0(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) t0[i] = base[free[i]];
    auto t = nelder_mead([&](std::span<const double> t) { return -expected_improvement(embed(t), gp, y_best); },
                         t0, 0.05, static_cast<int>(40 * (free.size() + 1)));
    auto snapped = space.encode(space.decode(embed(t)));
    const double ei = expected_improvement(snapped, gp, y_best);
    if (ei > best.ei) best = {ei, std::move(snapped)};
  }
  if (already_tried(seen, best.u)) {
    best.u = perturb(space, best.u, seen);
    best.ei = expected_improvement(best.u, gp, y_best);
  }
  out.x = space.decode(best.u);
  out.ei = best.ei;
  return out;
}

// ---------------------------------------------------------------------------
// Optimization loop

TrialLog optimize(const Objective& objective, const SearchSpace& space, std::size_t budget,
                  std::size_t init_count, std::uint64_t seed, const OptimizeOptions& options) {
  if (init_count < 2) throw Error("optimize: init_count must be >= 2");
  if (budget <= init_count) throw Error("optimize: budget must exceed init_count");
  TrialLog log;
  auto evaluate = [&](Point x) {
    Trial t;
    t.x = std::move(x);
    double y = std::numeric_limits<double>::quiet_NaN();
    try {
      y = objective(t.x);
      if (!std::isfinite(y)) t.message = "objective returned a non-finite value";
    } catch (const std::exception& e) {
      t.message = e.what();
    }
    if (std::isfinite(y)) {
      t.y = y;
    } else {
      t.failed = true;
      std::vector<double> ok;
      for (const auto& p : log.trials())
        if (!p.failed) ok.push_back(p.y);
      if (ok.empty()) {
        t.y = 1.0;
      } else {
        const double worst = *std::max_element(ok.begin(), ok.end());
        const double mean = std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
        double var = 0.0;
        for (double v : ok) var += (v - mean) * (v - mean);
        var /= static_cast<double>(ok.size());
        t.y = worst + (var > 0.0 ? std::sqrt(var) : 1.0);
      }
    }
    log.append(t);
    if (options.on_trial) options.on_trial(log.size() - 1, log.trials().back());
  };

  // Latin hypercube: one stratum per initial point in every dimension.
  Rng rng(derive_seed(seed, "init"));
  std::vector<std::vector<std::size_t>> perms(space.size());
  for (auto& p : perms) {
    p.resize(init_count);
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t i = init_count; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  }
  for (std::size_t i = 0; i < init_count; ++i) {
    std::vector<double> t(space.size());
    for (std::size_t d = 0; d < space.size(); ++d)
      t[d] = (static_cast<double>(perms[d][i]) + rng.uniform()) / static_cast<double>(init_count);
    evaluate(space.from_unit(t));
  }

  SuggestOptions sopt = options.suggest;
  for (std::size_t i = init_count; i < budget; ++i) {
    auto s = suggest_next(space, log, derive_seed(seed, "suggest" + std::to_string(i)), sopt);
    if (s.hyper) sopt.gp.warm_start = s.hyper;
    evaluate(std::move(s.x));
  }
  return log;
}

}  // namespace simvec
