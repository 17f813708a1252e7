#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "simvec/gp.hpp"
#include "simvec/rng.hpp"

namespace simvec {

enum class DimKind { kReal, kLogReal, kInteger, kCategorical };

struct Dimension {
  std::string name;
  DimKind kind = DimKind::kReal;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::string> categories;
};

using ParamValue = std::variant<double, std::int64_t, std::string>;
using Point = std::vector<ParamValue>;  // aligned with SearchSpace::dims()

std::string format_value(const ParamValue& v);

class SearchSpace {
 public:
  SearchSpace& add_real(std::string name, double lo, double hi);
  SearchSpace& add_log_real(std::string name, double lo, double hi);
  SearchSpace& add_integer(std::string name, std::int64_t lo, std::int64_t hi);
  SearchSpace& add_categorical(std::string name, std::vector<std::string> categories);

  const std::vector<Dimension>& dims() const { return dims_; }
  std::size_t size() const { return dims_.size(); }
  std::size_t encoded_size() const;
  std::size_t index_of(std::string_view name) const;

  double real(const Point& x, std::string_view name) const;
  std::int64_t integer(const Point& x, std::string_view name) const;
  const std::string& category(const Point& x, std::string_view name) const;

  // Throws on an out-of-bounds value, wrong type or unknown category.
  void check(const Point& x) const;
  std::vector<double> encode(const Point& x) const;
  // Inverse of encode; u is clamped to the cube, integers rounded and
  // categories taken as the argmax of their one-hot block.
  Point decode(std::span<const double> u) const;
  // One coordinate per dimension in [0,1) mapped to a valid point.
  Point from_unit(std::span<const double> per_dim) const;
  Point sample(Rng& rng) const;

  // Lines "name real lo hi", "name log-real lo hi", "name integer lo hi",
  // "name categorical a,b,c"; '#' starts a comment.
  static SearchSpace parse(std::istream& in);
  static SearchSpace parse_file(const std::string& path);

 private:
  SearchSpace& add(Dimension d);
  std::vector<Dimension> dims_;
};

SearchSpace default_d2v_space();
SearchSpace default_lsi_space();

struct Trial {
  Point x;
  double y = 0.0;
  bool failed = false;
  std::string message;
};

class TrialLog {
 public:
  void append(Trial t);
  const std::vector<Trial>& trials() const { return trials_; }
  std::size_t size() const { return trials_.size(); }
  const Trial& best() const;  // throws when empty
  // Incumbent-best value after each trial.
  std::vector<double> best_so_far() const;
  void write_csv(const SearchSpace& space, std::ostream& out) const;

 private:
  std::vector<Trial> trials_;
  std::size_t best_ = 0;
};

// Closed-form EI for minimization.
double expected_improvement(double mean, double sigma, double y_best);
double expected_improvement(std::span<const double> u, const GpPosterior& gp, double y_best);

struct SuggestOptions {
  int candidates = 1000;
  int refine = 5;
  GpOptions gp;
};

struct Suggestion {
  Point x;
  double ei = 0.0;
  double max_candidate_ei = 0.0;  // best EI among the raw candidates
  bool random_fallback = false;
  std::optional<GpHyper> hyper;  // fitted surrogate, reused as a warm start
};

Suggestion suggest_next(const SearchSpace& space, const TrialLog& log, std::uint64_t seed,
                        const SuggestOptions& options = {});

using Objective = std::function<double(const Point&)>;
using TrialCallback = std::function<void(std::size_t, const Trial&)>;

struct OptimizeOptions {
  SuggestOptions suggest;
  TrialCallback on_trial;
};

// Latin-hypercube initial design followed by fit -> suggest -> evaluate until
// `budget` trials. A throwing or non-finite objective is recorded as the
// worst value so far plus one standard deviation.
TrialLog optimize(const Objective& objective, const SearchSpace& space, std::size_t budget,
                  std::size_t init_count, std::uint64_t seed, const OptimizeOptions& options = {});

}  // namespace simvec
