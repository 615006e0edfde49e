#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "narrsmooth/networks.hpp"
#include "narrsmooth/smoothing.hpp"

namespace narrsmooth {

enum class Method { Cumulative, TimeSlice, Smoothing };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Cumulative: return "cumulative";
    case Method::TimeSlice: return "timeslice";
    case Method::Smoothing: return "smoothing";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "cumulative") return Method::Cumulative;
  if (s == "timeslice" || s == "time-slice") return Method::TimeSlice;
  if (s == "smoothing") return Method::Smoothing;
  return std::nullopt;
}

// Only the fields of the selected method are read: lambda for smoothing,
// window for time slices.
struct MethodParams {
  Method method = Method::Smoothing;
  double lambda = kDefaultLambda;
  std::optional<std::size_t> window;
  AmountMode mode = AmountMode::Seconds;

  void check() const {
    if (method == Method::Smoothing && !(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (method == Method::TimeSlice && (!window || *window < 1)) {
      throw std::invalid_argument("time-slice extraction requires a window of at least one scene");
    }
  }
};

// Per-scene edge weights of one extraction method, evaluated on demand from
// the interaction sequence. Pairs that never interact carry weight 0.
class DynamicNetwork {
 public:
  DynamicNetwork(std::shared_ptr<const InteractionSequence> seq, MethodParams params,
                 std::map<std::string, std::string> metadata = {})
      : seq_(std::move(seq)), params_(params), metadata_(std::move(metadata)) {
    if (!seq_) throw std::invalid_argument("null interaction sequence");
    params_.mode = seq_->mode();
    params_.check();
  }

  const InteractionSequence& sequence() const { return *seq_; }
  const MethodParams& params() const { return params_; }
  Method method() const { return params_.method; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  const CharacterRegistry& characters() const { return seq_->characters(); }
  std::size_t scene_count() const { return seq_->scene_count(); }
  std::size_t snapshot_count() const { return seq_->scene_count(); }

  // Pairs with at least one occurrence; all other pairs weigh 0.
  std::vector<CharacterPair> active_pairs() const {
    std::vector<CharacterPair> out;
    for (const auto& [pair, _] : seq_->pairs()) out.push_back(pair);
    return out;
  }

  // Smoothing: extended-real balance. Baselines: summed amount (never -inf).
  ExtendedWeight raw(CharacterPair pair, std::size_t t) const {
    detail::check_scene(*seq_, t);
    if (params_.method == Method::Smoothing) return smoothed_weight(*seq_, pair.first, pair.second, t);
    const std::size_t from = params_.method == Method::TimeSlice && t > *params_.window ? t - *params_.window + 1 : 1;
    Amount sum;
    if (const auto* occ = detail::occurrences_of(*seq_, pair)) {
      for (const auto& o : *occ) {
        if (o.scene > t) break;
        if (o.scene >= from) sum += o.amount;
      }
    }
    return sum;
  }

  // The weight a snapshot shows: normalized for smoothing, raw otherwise.
  double weight(CharacterPair pair, std::size_t t) const { return view(raw(pair, t)); }

  std::vector<ExtendedWeight> raw_series(CharacterPair pair) const {
    detail::require_pair(*seq_, pair.first, pair.second);
    if (params_.method == Method::Smoothing) return smoothed_series(*seq_, pair);
    const std::size_t S = scene_count();
    std::vector<ExtendedWeight> out(S, Amount{});
    const auto* occ = detail::occurrences_of(*seq_, pair);
    if (occ == nullptr) return out;
    std::vector<Amount> per_scene(S + 1);
    for (const auto& o : *occ) per_scene[o.scene] = o.amount;
    Amount running;
    for (std::size_t t = 1; t <= S; ++t) {
      running += per_scene[t];
      if (params_.method == Method::TimeSlice && t > *params_.window) running -= per_scene[t - *params_.window];
      out[t - 1] = running;
    }
    return out;
  }

  std::vector<double> series(CharacterPair pair) const {
    std::vector<double> out;
    for (const auto& w : raw_series(pair)) out.push_back(view(w));
    return out;
  }

  double view(const ExtendedWeight& w) const {
    return params_.method == Method::Smoothing ? normalize(w, params_.lambda) : w.value();
  }

  // The network state at scene t as a static graph.
  StaticGraph snapshot(std::size_t t) const {
    detail::check_scene(*seq_, t);
    if (params_.method == Method::Cumulative) return cumulative(*seq_, t);
    if (params_.method == Method::TimeSlice) return time_slice(*seq_, t, *params_.window);
    StaticGraph g{characters(), {}, std::nullopt, t, t, "normalized"};
    for (const auto& [pair, _] : seq_->pairs()) {
      const double n = weight(pair, t);
      if (n > 0.0) g.edges.emplace(pair, n);
    }
    return g;
  }

 private:
  std::shared_ptr<const InteractionSequence> seq_;
  MethodParams params_;
  std::map<std::string, std::string> metadata_;
};

inline DynamicNetwork extract(InteractionSequence seq, MethodParams params,
                              std::map<std::string, std::string> metadata = {}) {
  return DynamicNetwork(std::make_shared<const InteractionSequence>(std::move(seq)), params, std::move(metadata));
}

inline DynamicNetwork smooth_all(InteractionSequence seq, double lambda = kDefaultLambda,
                                 std::map<std::string, std::string> metadata = {}) {
  MethodParams p;
  p.method = Method::Smoothing;
  p.lambda = lambda;
  return extract(std::move(seq), p, std::move(metadata));
}

}  // namespace narrsmooth
