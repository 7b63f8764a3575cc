#include "tracelab/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tracelab {

namespace {

constexpr std::uint64_t kIndexCap = 1ull << 62;

double segment_value(const Segment& s, std::uint64_t k) {
  return s.constant ? s.value : s.rule(k);
}

const Segment* find_segment(const PiecewiseRep& rep, std::uint64_t k) {
  for (const auto& s : rep.segments) {
    if (k >= s.begin && (s.end == 0 || k < s.end)) return &s;
  }
  return nullptr;
}

void validate_explicit(const ExplicitRep& rep) {
  const auto& v = rep.values;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i]))
      throw ConfigError("explicit sequence: entries must be finite and >= 0");
    if (i + 1 < v.size() && v[i] < v[i + 1])
      throw ConfigError("explicit sequence: not nonincreasing (input is not sorted)");
  }
}

void validate_closed_form(const ClosedFormRep& rep) {
  if (!rep.rule) throw ConfigError("closed-form sequence: missing rule");
  double prev = rep.rule(1);
  if (!(prev >= 0.0) || !std::isfinite(prev))
    throw ConfigError("closed-form sequence: mu_1 must be finite and >= 0");
  const std::uint64_t dense = std::min<std::uint64_t>(1024, rep.materialize_limit);
  for (std::uint64_t k = 2; k <= dense; ++k) {
    const double cur = rep.rule(k);
    if (!(cur >= 0.0) || cur > prev)
      throw ConfigError("closed-form sequence: monotonicity violated on prefix");
    prev = cur;
  }
  // dyadic spot checks further out
  for (std::uint64_t k = 2048; k <= (1ull << 40); k <<= 1) {
    const double a = rep.rule(k);
    const double b = rep.rule(k + 1);
    if (!(a >= 0.0) || !(b >= 0.0) || b > a)
      throw ConfigError("closed-form sequence: monotonicity violated at spot check");
  }
}

void validate_piecewise(const PiecewiseRep& rep) {
  if (rep.segments.empty()) throw ConfigError("piecewise sequence: no segments");
  if (rep.segments.front().begin != 1)
    throw ConfigError("piecewise sequence: first block must start at index 1");
  double prev = -1.0;
  for (std::size_t i = 0; i < rep.segments.size(); ++i) {
    const Segment& s = rep.segments[i];
    const bool last = i + 1 == rep.segments.size();
    if (s.end != 0 && s.end <= s.begin)
      throw ConfigError("piecewise sequence: empty block");
    if (!last) {
      if (s.end == 0 || rep.segments[i + 1].begin != s.end)
        throw ConfigError("piecewise sequence: blocks must tile contiguously");
    }
    if (!s.constant && !s.rule)
      throw ConfigError("piecewise sequence: rule block without rule");
    // sample: block endpoints plus a bounded number of interior points
    const std::uint64_t hi = (s.end == 0) ? s.begin + 1024 : s.end - 1;
    const std::uint64_t samples = std::min<std::uint64_t>(hi - s.begin + 1, 1024);
    const std::uint64_t stride = std::max<std::uint64_t>(1, (hi - s.begin + 1) / samples);
    double first = segment_value(s, s.begin);
    if (prev >= 0.0 && first > prev + 0.0)
      throw ConfigError("piecewise sequence: increases across block boundary");
    double p = first;
    for (std::uint64_t k = s.begin; k <= hi; k += stride) {
      const double cur = segment_value(s, k);
      if (!(cur >= 0.0) || !std::isfinite(cur))
        throw ConfigError("piecewise sequence: entries must be finite and >= 0");
      if (cur > p) throw ConfigError("piecewise sequence: not nonincreasing inside block");
      p = cur;
    }
    prev = segment_value(s, hi);
  }
}

void validate_runs(RunsRep& rep) {
  rep.cum.clear();
  rep.cum.reserve(rep.runs.size());
  std::uint64_t total = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (const Run& r : rep.runs) {
    if (r.count == 0) throw ConfigError("run sequence: zero multiplicity");
    if (!(r.value >= 0.0) || !std::isfinite(r.value))
      throw ConfigError("run sequence: values must be finite and >= 0");
    if (!(r.value < prev))
      throw ConfigError("run sequence: values must be strictly decreasing");
    prev = r.value;
    if (total > kIndexCap - r.count)
      throw ConfigError("run sequence: index overflow");
    total += r.count;
    rep.cum.push_back(total);
  }
}

void validate_log_blocks(const LogBlockRep& rep) {
  for (std::size_t i = 0; i < rep.head.size(); ++i) {
    if (!(rep.head[i] >= 0.0)) throw ConfigError("log-block sequence: bad head value");
    if (i + 1 < rep.head.size() && rep.head[i] < rep.head[i + 1])
      throw ConfigError("log-block sequence: head not nonincreasing");
  }
  double prev_log_end = std::log(static_cast<double>(std::max<std::size_t>(rep.head.size(), 1)));
  double prev_log_val = (rep.head.empty() || rep.head.back() == 0.0)
                            ? std::numeric_limits<double>::infinity()
                            : std::log(rep.head.back());
  double prev_sigma = rep.head_sigma;
  std::uint64_t prev_end_int =
      static_cast<std::uint64_t>(rep.head.size());
  for (const LogBlock& b : rep.blocks) {
    if (!(b.log_end > prev_log_end))
      throw ConfigError("log-block sequence: block ends must increase");
    if (!(b.log_value <= prev_log_val))
      throw ConfigError("log-block sequence: block values must decrease");
    if (b.end_int != 0 && prev_end_int != 0) {
      // closed-form sigma must match direct block arithmetic while exact
      // integer boundaries are available
      const double direct =
          prev_sigma + static_cast<double>(b.end_int - prev_end_int) * std::exp(b.log_value);
      if (std::abs(direct - b.sigma_end) > 1e-12 * std::max(1.0, std::abs(direct)))
        throw ConfigError("log-block sequence: sigma closed form inconsistent");
    }
    prev_log_end = b.log_end;
    prev_log_val = b.log_value;
    prev_sigma = b.sigma_end;
    prev_end_int = b.end_int;
  }
}

double log_block_mu(const LogBlockRep& rep, std::uint64_t k) {
  if (k <= rep.head.size()) return rep.head[k - 1];
  const double lk = std::log(static_cast<double>(k));
  for (const LogBlock& b : rep.blocks) {
    const bool inside = (b.end_int != 0) ? (k <= b.end_int) : (lk <= b.log_end);
    if (inside) return std::exp(b.log_value);
  }
  return 0.0;  // beyond the materialized blocks
}

bool log_block_sigma(const LogBlockRep& rep, std::uint64_t k, double& out) {
  if (k <= rep.head.size()) {
    KahanSum acc;
    for (std::uint64_t j = 0; j < k; ++j) acc.add(rep.head[j]);
    out = acc.value();
    return true;
  }
  double prev_sigma = rep.head_sigma;
  std::uint64_t prev_end = static_cast<std::uint64_t>(rep.head.size());
  const double lk = std::log(static_cast<double>(k));
  for (const LogBlock& b : rep.blocks) {
    const bool inside = (b.end_int != 0) ? (k <= b.end_int) : (lk <= b.log_end);
    if (inside) {
      if (prev_end == 0)
        throw NumericError("log-block sigma: index not reachable from an exact boundary");
      out = prev_sigma +
            static_cast<double>(k - prev_end) * std::exp(b.log_value);
      return true;
    }
    prev_sigma = b.sigma_end;
    prev_end = b.end_int;
  }
  out = rep.blocks.empty() ? rep.head_sigma : rep.blocks.back().sigma_end;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// CharacteristicSequence
// ---------------------------------------------------------------------------

CharacteristicSequence::CharacteristicSequence(std::string name, Rep rep,
                                               TailDescriptor tail) {
  std::visit(
      [](auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExplicitRep>) validate_explicit(r);
        else if constexpr (std::is_same_v<T, ClosedFormRep>) validate_closed_form(r);
        else if constexpr (std::is_same_v<T, PiecewiseRep>) validate_piecewise(r);
        else if constexpr (std::is_same_v<T, RunsRep>) validate_runs(r);
        else validate_log_blocks(r);
      },
      rep);
  d_ = std::make_shared<Data>(Data{std::move(name), std::move(rep), std::move(tail)});
}

CharacteristicSequence CharacteristicSequence::from_values(
    std::string name, std::vector<double> values) {
  const std::uint64_t last = values.size();
  return CharacteristicSequence(std::move(name), ExplicitRep{std::move(values)},
                                TailDescriptor::finite_tail(last));
}

CharacteristicSequence CharacteristicSequence::closed_form(
    std::string name, std::function<double(std::uint64_t)> rule, TailDescriptor tail) {
  return CharacteristicSequence(std::move(name), ClosedFormRep{std::move(rule)},
                                std::move(tail));
}

double CharacteristicSequence::mu(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("mu: index must be >= 1");
  return std::visit(
      [k](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExplicitRep>) {
          return k <= r.values.size() ? r.values[k - 1] : 0.0;
        } else if constexpr (std::is_same_v<T, ClosedFormRep>) {
          return r.rule(k);
        } else if constexpr (std::is_same_v<T, PiecewiseRep>) {
          const Segment* s = find_segment(r, k);
          if (!s) throw ConfigError("piecewise sequence: blocks do not cover index");
          return segment_value(*s, k);
        } else if constexpr (std::is_same_v<T, RunsRep>) {
          if (r.cum.empty() || k > r.cum.back()) return 0.0;
          const auto it = std::lower_bound(r.cum.begin(), r.cum.end(), k);
          return r.runs[static_cast<std::size_t>(it - r.cum.begin())].value;
        } else {
          return log_block_mu(r, k);
        }
      },
      d_->rep);
}

std::optional<std::uint64_t> CharacteristicSequence::length() const {
  return std::visit(
      [](const auto& r) -> std::optional<std::uint64_t> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExplicitRep>) {
          return r.values.size();
        } else if constexpr (std::is_same_v<T, RunsRep>) {
          return r.cum.empty() ? 0 : r.cum.back();
        } else {
          return std::nullopt;
        }
      },
      d_->rep);
}

std::uint64_t CharacteristicSequence::count_at_least(double v) const {
  if (!(v > 0.0)) throw std::invalid_argument("count_at_least: threshold must be > 0");
  if (mu(1) < v) return 0;
  std::uint64_t lo = 1, hi = 1;
  while (hi < kIndexCap && mu(hi) >= v) {
    lo = hi;
    hi = (hi > kIndexCap / 2) ? kIndexCap : hi * 2;
  }
  if (mu(hi) >= v) throw NumericError("count_at_least: count exceeds 2^62");
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (mu(mid) >= v ? lo : hi) = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// scaling, materialization, merge
// ---------------------------------------------------------------------------

namespace {

TailDescriptor scale_tail(const TailDescriptor& t, double lambda) {
  TailDescriptor s = t;
  s.coeff *= lambda;
  s.C *= lambda;
  s.L *= lambda;
  if (t.eps) {
    auto inner = t.eps;
    s.eps = [inner, lambda](double n) { return lambda * inner(n); };
  }
  if (t.lower_c) s.lower_c = *t.lower_c * lambda;
  return s;
}

}  // namespace

CharacteristicSequence scale_sequence(const CharacteristicSequence& seq,
                                      double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("scale_sequence: factor must be >= 0");
  const std::string name = seq.name() + "*" + std::to_string(lambda);
  if (lambda == 0.0) return CharacteristicSequence::from_values(name, {});
  TailDescriptor tail = scale_tail(seq.tail(), lambda);
  return std::visit(
      [&](const auto& r) -> CharacteristicSequence {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExplicitRep>) {
          std::vector<double> v = r.values;
          for (double& x : v) x *= lambda;
          return CharacteristicSequence(name, ExplicitRep{std::move(v)}, tail);
        } else if constexpr (std::is_same_v<T, ClosedFormRep>) {
          auto rule = r.rule;
          return CharacteristicSequence(
              name,
              ClosedFormRep{[rule, lambda](std::uint64_t k) { return lambda * rule(k); },
                            r.materialize_limit},
              tail);
        } else if constexpr (std::is_same_v<T, PiecewiseRep>) {
          PiecewiseRep out;
          out.materialize_limit = r.materialize_limit;
          for (const Segment& s : r.segments) {
            Segment c = s;
            if (c.constant) {
              c.value *= lambda;
            } else {
              auto rule = s.rule;
              c.rule = [rule, lambda](std::uint64_t k) { return lambda * rule(k); };
            }
            out.segments.push_back(std::move(c));
          }
          return CharacteristicSequence(name, std::move(out), tail);
        } else if constexpr (std::is_same_v<T, RunsRep>) {
          RunsRep out;
          out.runs = r.runs;
          for (Run& run : out.runs) run.value *= lambda;
          return CharacteristicSequence(name, std::move(out), tail);
        } else {
          LogBlockRep out = r;
          const double ll = std::log(lambda);
          for (double& h : out.head) h *= lambda;
          out.head_sigma *= lambda;
          for (LogBlock& b : out.blocks) {
            b.log_value += ll;
            b.sigma_end *= lambda;
          }
          return CharacteristicSequence(name, std::move(out), tail);
        }
      },
      seq.rep());
}

std::vector<double> materialize_prefix(const CharacteristicSequence& seq,
                                       std::uint64_t n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  // run-structured reps stream faster than repeated mu() lookups
  if (const auto* runs = std::get_if<RunsRep>(&seq.rep())) {
    for (const Run& r : runs->runs) {
      for (std::uint64_t i = 0; i < r.count && out.size() < n; ++i)
        out.push_back(r.value);
      if (out.size() >= n) break;
    }
    out.resize(static_cast<std::size_t>(n), 0.0);
    return out;
  }
  for (std::uint64_t k = 1; k <= n; ++k) out.push_back(seq.mu(k));
  return out;
}

namespace {

// Upper bound on #{k : mu_k >= v} derivable from a descriptor (head included).
double count_envelope(const TailDescriptor& t, double mu1, double v) {
  switch (t.kind) {
    case TailKind::finite:
      return static_cast<double>(t.last);
    case TailKind::geometric: {
      if (t.ratio <= 0.0 || t.ratio >= 1.0) return std::numeric_limits<double>::infinity();
      const double c = std::max(t.coeff, mu1);
      if (v >= c) return static_cast<double>(t.from);
      return static_cast<double>(t.from) + std::log(c / v) / std::log(1.0 / t.ratio);
    }
    case TailKind::inverse_bound:
      return static_cast<double>(t.from) + t.C / v;
    case TailKind::inverse_asymptotic:
      return static_cast<double>(t.from) +
             (t.L + t.eps_at(static_cast<double>(t.from))) / v;
    case TailKind::vanishing:
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

TailDescriptor merged_tail(const TailDescriptor& a, double mu1_a,
                           const TailDescriptor& b, double mu1_b) {
  if (a.kind == TailKind::finite && b.kind == TailKind::finite)
    return TailDescriptor::finite_tail(a.last + b.last);

  const bool asym_a = a.kind == TailKind::inverse_asymptotic;
  const bool asym_b = b.kind == TailKind::inverse_asymptotic;
  const double L = (asym_a ? a.L : 0.0) + (asym_b ? b.L : 0.0);
  if ((asym_a || asym_b) && L > 0.0) {
    // count-at-level argument: alpha_z(1/v) = alpha_x(1/v) + alpha_y(1/v),
    // with the non-asymptotic side contributing a sublinear count envelope
    const TailDescriptor ca = a, cb = b;
    const double La = asym_a ? a.L : 0.0;
    const double Lb = asym_b ? b.L : 0.0;
    auto eps_z = [ca, cb, mu1_a, mu1_b, La, Lb, L, asym_a, asym_b](double N) {
      const double n = std::max(N, 16.0);
      double e = 0.0;
      double slack = 4.0;
      if (asym_a) {
        const double ka = std::max({1.0, n * La / (2.0 * L), static_cast<double>(ca.from)});
        e += ca.eps_at(ka);
        slack += static_cast<double>(ca.from);
      } else {
        slack += count_envelope(ca, mu1_a, L / n);
      }
      if (asym_b) {
        const double kb = std::max({1.0, n * Lb / (2.0 * L), static_cast<double>(cb.from)});
        e += cb.eps_at(kb);
        slack += static_cast<double>(cb.from);
      } else {
        slack += count_envelope(cb, mu1_b, L / n);
      }
      return e + 2.0 * L * slack / n;
    };
    return TailDescriptor::asymptotic(L, eps_z, 64);
  }

  const auto Ca = a.inverse_envelope();
  const auto Cb = b.inverse_envelope();
  if (Ca && Cb) {
    const double head_a = a.kind == TailKind::finite ? mu1_a * static_cast<double>(a.last) : 0.0;
    const double head_b = b.kind == TailKind::finite ? mu1_b * static_cast<double>(b.last) : 0.0;
    const double C = 2.0 * (*Ca + *Cb + head_a + head_b);
    return TailDescriptor::inverse(C, 2 * (a.from + b.from) + 2);
  }
  if (a.kind == TailKind::finite && Cb) {
    return TailDescriptor::inverse(2.0 * (*Cb + mu1_a * static_cast<double>(a.last)),
                                   2 * b.from + 2 * a.last + 2);
  }
  if (b.kind == TailKind::finite && Ca) {
    return TailDescriptor::inverse(2.0 * (*Ca + mu1_b * static_cast<double>(b.last)),
                                   2 * a.from + 2 * b.last + 2);
  }
  return TailDescriptor::unknown();
}

}  // namespace

CharacteristicSequence merge_sequences(const CharacteristicSequence& x,
                                       const CharacteristicSequence& y,
                                       std::uint64_t n_terms) {
  std::vector<double> a = materialize_prefix(x, n_terms);
  std::vector<double> b = materialize_prefix(y, n_terms);
  std::vector<double> z;
  z.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(z),
             std::greater<double>());
  z.resize(static_cast<std::size_t>(n_terms), 0.0);
  TailDescriptor tail = merged_tail(x.tail(), x.mu(1), y.tail(), y.mu(1));
  return CharacteristicSequence("merge(" + x.name() + "," + y.name() + ")",
                                ExplicitRep{std::move(z)}, std::move(tail));
}

// ---------------------------------------------------------------------------
// IndexSchedule
// ---------------------------------------------------------------------------

IndexSchedule IndexSchedule::dyadic(int max_exponent) {
  if (max_exponent < 1) throw ConfigError("dyadic schedule: exponent must be >= 1");
  IndexSchedule s;
  for (int j = 1; j <= max_exponent; ++j) s.indices.push_back(1ull << j);
  return s;
}

IndexSchedule& IndexSchedule::add(std::uint64_t k) {
  if (k < 2) throw ConfigError("index schedule: indices must be >= 2");
  auto it = std::lower_bound(indices.begin(), indices.end(), k);
  if (it == indices.end() || *it != k) indices.insert(it, k);
  return *this;
}

// ---------------------------------------------------------------------------
// PrefixSumTable
// ---------------------------------------------------------------------------

PrefixSumTable::PrefixSumTable(CharacteristicSequence seq) : seq_(std::move(seq)) {}

double PrefixSumTable::sigma_closed(std::uint64_t k, bool& handled) const {
  if (const auto* lb = std::get_if<LogBlockRep>(&seq_.rep())) {
    double out = 0.0;
    handled = log_block_sigma(*lb, k, out);
    return out;
  }
  handled = false;
  return 0.0;
}

void PrefixSumTable::advance(Cursor& c, std::uint64_t target) const {
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExplicitRep>) {
          const std::uint64_t stop =
              std::min<std::uint64_t>(target, r.values.size());
          while (c.pos < stop) c.acc.add(r.values[static_cast<std::size_t>(c.pos++)]);
          c.pos = target;  // zeros beyond the list
        } else if constexpr (std::is_same_v<T, ClosedFormRep>) {
          if (target > r.materialize_limit)
            throw NumericError("sigma: closed-form materialization limit exceeded");
          while (c.pos < target) c.acc.add(r.rule(++c.pos));
        } else if constexpr (std::is_same_v<T, PiecewiseRep>) {
          while (c.pos < target) {
            if (c.seg_idx >= r.segments.size())
              throw ConfigError("sigma: piecewise blocks do not cover index range");
            const Segment& s = r.segments[c.seg_idx];
            const std::uint64_t last =
                (s.end == 0) ? target : std::min<std::uint64_t>(target, s.end - 1);
            if (s.constant) {
              const std::uint64_t chunk = last - c.pos;
              c.acc.add(s.value * static_cast<double>(chunk));
              c.pos = last;
            } else {
              if (last - c.pos > r.materialize_limit)
                throw NumericError("sigma: piecewise materialization limit exceeded");
              while (c.pos < last) c.acc.add(s.rule(++c.pos));
            }
            if (s.end != 0 && c.pos == s.end - 1 && c.pos < target) ++c.seg_idx;
          }
        } else if constexpr (std::is_same_v<T, RunsRep>) {
          while (c.pos < target && c.run_idx < r.runs.size()) {
            const Run& run = r.runs[c.run_idx];
            const std::uint64_t avail = run.count - c.run_off;
            const std::uint64_t take =
                std::min<std::uint64_t>(avail, target - c.pos);
            c.acc.add(run.value * static_cast<double>(take));
            c.pos += take;
            c.run_off += take;
            if (c.run_off == run.count) {
              ++c.run_idx;
              c.run_off = 0;
            }
          }
          c.pos = target;  // zeros beyond the materialized stream
        } else {
          throw NumericError("sigma: log-block sequences use closed forms");
        }
      },
      seq_.rep());
}

double PrefixSumTable::sigma(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("sigma: index must be >= 1");
  bool handled = false;
  const double closed = sigma_closed(k, handled);
  if (handled) return closed;

  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = std::lower_bound(
      cache_.begin(), cache_.end(), k,
      [](const std::pair<std::uint64_t, double>& e, std::uint64_t v) { return e.first < v; });
  if (it != cache_.end() && it->first == k) return it->second;

  if (k < cursor_.pos) cursor_ = Cursor{};  // restart for a backward query

  auto remember = [this](std::uint64_t idx, double value) {
    const std::pair<std::uint64_t, double> entry{idx, value};
    const auto pos = std::lower_bound(cache_.begin(), cache_.end(), entry);
    if (pos == cache_.end() || pos->first != idx) cache_.insert(pos, entry);
  };

  // cache dyadic indices crossed on the way
  std::uint64_t p = 2;
  while (p != 0 && p <= cursor_.pos) p <<= 1;
  while (p != 0 && p < k) {
    advance(cursor_, p);
    remember(p, cursor_.acc.value());
    p <<= 1;
  }
  advance(cursor_, k);
  const double value = cursor_.acc.value();
  remember(k, value);
  return value;
}

double PrefixSumTable::gamma(std::uint64_t k) const {
  if (k < 2) throw std::invalid_argument("gamma: index must be >= 2");
  return sigma(k) / std::log(static_cast<double>(k));
}

double mu(const CharacteristicSequence& seq, std::uint64_t k) { return seq.mu(k); }
double sigma(const PrefixSumTable& table, std::uint64_t k) { return table.sigma(k); }
double gamma(const PrefixSumTable& table, std::uint64_t k) { return table.gamma(k); }

double pairing_bound(const CharacteristicSequence& x,
                     const CharacteristicSequence& y, std::uint64_t N) {
  if (N == 0) throw std::invalid_argument("pairing_bound: N must be >= 1");
  const auto lx = x.length();
  const auto ly = y.length();
  std::uint64_t stop = N;
  if (lx) stop = std::min(stop, *lx);
  if (ly) stop = std::min(stop, *ly);
  KahanSum acc;
  for (std::uint64_t k = 1; k <= stop; ++k) acc.add(x.mu(k) * y.mu(k));
  return acc.value();
}

// ---------------------------------------------------------------------------
// L^{1,inf} membership diagnostic
// ---------------------------------------------------------------------------

const char* verdict_name(IdealVerdict v) {
  switch (v) {
    case IdealVerdict::member: return "member";
    case IdealVerdict::non_member: return "non-member";
    case IdealVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Per-block endpoint certification for log-block reps: if sigma <= C0 + log k
// holds at every block end (and on the head), linear growth inside a constant
// block stays below the concave bound, so it holds everywhere.
std::optional<AffineLogWitness> log_block_witness(const LogBlockRep& rep) {
  double C0 = 0.0;
  KahanSum acc;
  for (std::size_t j = 0; j < rep.head.size(); ++j) {
    acc.add(rep.head[j]);
    const double lk = std::log(static_cast<double>(j + 1));
    C0 = std::max(C0, acc.value() - lk);
  }
  for (const LogBlock& b : rep.blocks)
    C0 = std::max(C0, b.sigma_end - b.log_end);
  AffineLogWitness w;
  w.C0 = C0;
  w.C1 = 1.0;
  w.from = 1;
  w.description = "per-block endpoint bound sigma_k <= " + std::to_string(C0) + " + log k";
  return w;
}

}  // namespace

L1InfReport l1inf_diagnostic(const CharacteristicSequence& seq,
                             const IndexSchedule& schedule) {
  if (schedule.empty()) throw std::invalid_argument("l1inf_diagnostic: empty schedule");
  L1InfReport report;
  PrefixSumTable table(seq);
  for (const std::uint64_t k : schedule.indices)
    if (k >= 2) report.sup_gamma_observed = std::max(report.sup_gamma_observed, table.gamma(k));

  const TailDescriptor& t = seq.tail();

  if (const auto* lb = std::get_if<LogBlockRep>(&seq.rep())) {
    report.witness = log_block_witness(*lb);
    report.verdict = IdealVerdict::member;
    return report;
  }

  switch (t.kind) {
    case TailKind::finite: {
      AffineLogWitness w;
      w.C0 = t.last == 0 ? 0.0 : table.sigma(t.last);
      w.C1 = 0.0;
      w.description = "finitely supported: sigma_n <= sigma_last";
      report.witness = w;
      report.verdict = IdealVerdict::member;
      break;
    }
    case TailKind::geometric: {
      if (t.ratio <= 0.0 || t.ratio >= 1.0) break;
      AffineLogWitness w;
      const double head = table.sigma(std::max<std::uint64_t>(t.from, 1));
      w.C0 = head + t.coeff * std::pow(t.ratio, static_cast<double>(t.from) + 1.0) /
                        (1.0 - t.ratio);
      w.C1 = 0.0;
      w.description = "geometric tail: sigma_n bounded";
      report.witness = w;
      report.verdict = IdealVerdict::member;
      break;
    }
    case TailKind::inverse_bound:
    case TailKind::inverse_asymptotic: {
      const double C = *t.inverse_envelope();
      AffineLogWitness w;
      const double lf = std::log(static_cast<double>(std::max<std::uint64_t>(t.from, 1)));
      w.C0 = table.sigma(std::max<std::uint64_t>(t.from, 1)) - C * lf;
      w.C1 = C;
      w.from = t.from;
      w.description = "O(1/n) envelope: sigma_n <= C0 + C*log n";
      report.witness = w;
      report.verdict = IdealVerdict::member;
      break;
    }
    case TailKind::vanishing:
      break;
  }

  if (report.verdict == IdealVerdict::inconclusive && t.lower_c && t.lower_p < 1.0) {
    // mu_k >= c k^{-p}, p < 1 forces sigma_n >= c n^{1-p}/(1-p), so gamma
    // diverges: certified non-member.
    report.verdict = IdealVerdict::non_member;
  }
  return report;
}

}  // namespace tracelab
