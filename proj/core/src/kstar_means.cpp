#include "kstar/kstar_means.hpp"

#include <chrono>
#include <limits>
#include <numeric>
#include <string>

#include "kstar/error.hpp"

namespace kstar {
namespace {

std::size_t nearest_row(const Matrix& centers, std::span<const double> p) {
  std::size_t best = 0;
  double best_d = squared_distance(p, centers.row(0));
  for (std::size_t c = 1; c < centers.rows(); ++c) {
    const double dist = squared_distance(p, centers.row(c));
    if (dist < best_d) {
      best_d = dist;
      best = c;
    }
  }
  return best;
}

std::uint8_t nearer_sub(const ClusterModel& model, std::size_t cluster,
                        std::span<const double> p) {
  const double d0 = squared_distance(p, model.subcentroid(cluster, 0));
  const double d1 = squared_distance(p, model.subcentroid(cluster, 1));
  return d1 < d0 ? 1 : 0;
}

std::vector<std::vector<std::size_t>> members_by_cluster(const ClusterModel& model) {
  std::vector<std::vector<std::size_t>> members(model.k());
  for (std::size_t i = 0; i < model.assignments.size(); ++i) {
    members[model.assignments[i]].push_back(i);
  }
  return members;
}

void set_row(Matrix& m, std::size_t r, std::span<const double> values) {
  std::copy(values.begin(), values.end(), m.row(r).begin());
}

// Seeds a fresh subcentroid pair for `cluster` and re-splits its points.
// Returns whether any point's subassignment changed.
bool reseed_subclusters(const Dataset& data, ClusterModel& model, std::size_t cluster,
                        std::span<const std::size_t> members, Rng& rng) {
  const Matrix pair = init_subcentroids(data, members, rng);
  set_row(model.subcentroids, 2 * cluster, pair.row(0));
  set_row(model.subcentroids, 2 * cluster + 1, pair.row(1));
  bool changed = false;
  for (std::size_t i : members) {
    const std::uint8_t s = nearer_sub(model, cluster, data.point(i));
    changed |= s != model.subassignments[i];
    model.subassignments[i] = s;
  }
  return changed;
}

// Drops clusters without points, preserving the order of the others.
void remove_empty_clusters(ClusterModel& model) {
  std::vector<std::size_t> counts(model.k(), 0);
  for (std::size_t a : model.assignments) ++counts[a];
  std::vector<std::size_t> remap(model.k());
  std::size_t next = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0) remap[c] = next++;
  }
  if (next == model.k()) return;
  for (std::size_t c = counts.size(); c-- > 0;) {
    if (counts[c] > 0) continue;
    model.centroids.erase_row(c);
    model.subcentroids.erase_row(2 * c + 1);
    model.subcentroids.erase_row(2 * c);
  }
  for (std::size_t& a : model.assignments) a = remap[a];
}

struct ClusterStats {
  std::size_t count = 0;
  std::size_t sub_count[2] = {0, 0};
  double ss = 0.0;             // about the cluster's centroid
  double sub_ss[2] = {0.0, 0.0};  // about each subcentroid
};

std::vector<ClusterStats> cluster_stats(const Dataset& data, const ClusterModel& model) {
  std::vector<ClusterStats> stats(model.k());
  for (std::size_t i = 0; i < data.n(); ++i) {
    const std::size_t c = model.assignments[i];
    const std::uint8_t s = model.subassignments[i];
    const auto p = data.point(i);
    ClusterStats& st = stats[c];
    ++st.count;
    ++st.sub_count[s];
    st.ss += squared_distance(p, model.centroids.row(c));
    st.sub_ss[s] += squared_distance(p, model.subcentroid(c, s));
  }
  return stats;
}

void notify(const StepObserver& observer, StepKind kind, std::size_t cycle, bool changed,
            double delta, const ClusterModel& model) {
  if (observer) observer(StepEvent{kind, cycle, changed, delta, model});
}

}  // namespace

Matrix init_subcentroids(const Dataset& data, std::span<const std::size_t> members, Rng& rng) {
  if (members.empty()) throw ContractError("init_subcentroids on an empty cluster");
  Matrix pair(2, data.dim());
  const std::size_t first = members[uniform_index(rng, members.size())];
  set_row(pair, 0, data.point(first));

  std::vector<double> weights(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    weights[i] = squared_distance(data.point(members[i]), data.point(first));
  }
  const std::size_t pick = weighted_index(rng, weights);
  const std::size_t second = pick < members.size() ? members[pick] : first;
  set_row(pair, 1, data.point(second));
  return pair;
}

ClusterModel initial_model(const Dataset& data, Rng& rng) {
  Matrix mean(1, data.dim(), 0.0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto p = data.point(i);
    for (std::size_t j = 0; j < data.dim(); ++j) mean(0, j) += p[j];
  }
  for (std::size_t j = 0; j < data.dim(); ++j) mean(0, j) /= static_cast<double>(data.n());
  return model_from_centroids(data, mean, rng);
}

ClusterModel model_from_centroids(const Dataset& data, const Matrix& centroids, Rng& rng) {
  if (centroids.rows() == 0 || centroids.cols() != data.dim()) {
    throw ContractError("model_from_centroids: centroid shape does not match data");
  }
  ClusterModel model;
  model.centroids = centroids;
  model.assignments.resize(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    model.assignments[i] = nearest_row(model.centroids, data.point(i));
  }
  model.subcentroids = Matrix(2 * centroids.rows(), data.dim());
  model.subassignments.assign(data.n(), 0);
  remove_empty_clusters(model);
  const auto members = members_by_cluster(model);
  for (std::size_t c = 0; c < model.k(); ++c) {
    reseed_subclusters(data, model, c, members[c], rng);
  }
  return model;
}

bool assign_step(const Dataset& data, ClusterModel& model) {
  bool changed = false;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto p = data.point(i);
    const std::size_t c = nearest_row(model.centroids, p);
    const std::uint8_t s = nearer_sub(model, c, p);
    changed |= c != model.assignments[i] || s != model.subassignments[i];
    model.assignments[i] = c;
    model.subassignments[i] = s;
  }
  remove_empty_clusters(model);
  return changed;
}

bool update_step(const Dataset& data, ClusterModel& model, Rng& rng) {
  const std::size_t k = model.k();
  const std::size_t d = data.dim();
  Matrix sums(k, d, 0.0);
  Matrix sub_sums(2 * k, d, 0.0);
  std::vector<std::size_t> counts(k, 0);
  std::vector<std::size_t> sub_counts(2 * k, 0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const std::size_t c = model.assignments[i];
    const std::size_t s = 2 * c + model.subassignments[i];
    const auto p = data.point(i);
    auto row = sums.row(c);
    auto sub_row = sub_sums.row(s);
    for (std::size_t j = 0; j < d; ++j) {
      row[j] += p[j];
      sub_row[j] += p[j];
    }
    ++counts[c];
    ++sub_counts[s];
  }

  std::vector<std::size_t> reseed;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      model.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
    }
    if (sub_counts[2 * c] == 0 || sub_counts[2 * c + 1] == 0) {
      reseed.push_back(c);
      continue;
    }
    for (std::size_t s = 2 * c; s < 2 * c + 2; ++s) {
      for (std::size_t j = 0; j < d; ++j) {
        model.subcentroids(s, j) = sub_sums(s, j) / static_cast<double>(sub_counts[s]);
      }
    }
  }
  if (reseed.empty()) return false;

  const auto members = members_by_cluster(model);
  bool changed = false;
  for (std::size_t c : reseed) changed |= reseed_subclusters(data, model, c, members[c], rng);
  return changed;
}

MoveOutcome maybe_split(const Dataset& data, ClusterModel& model,
                        const PrecisionInfo& precision, Rng& rng) {
  const std::size_t k = model.k();
  const auto stats = cluster_stats(data, model);

  MoveOutcome out;
  bool found = false;
  for (std::size_t c = 0; c < k; ++c) {
    const ClusterStats& st = stats[c];
    if (st.count < 2 || st.sub_count[0] == 0 || st.sub_count[1] == 0) continue;
    const double delta = split_delta(st.ss, st.sub_ss[0], st.sub_ss[1], k, data.n(),
                                     precision, data.dim());
    if (!found || delta < out.delta) {
      found = true;
      out.delta = delta;
      out.cluster = c;
    }
  }
  if (!found || !(out.delta < 0.0)) return out;

  // sub0 takes the parent's slot, sub1 becomes cluster parent + 1.
  const std::size_t parent = out.cluster;
  const std::vector<double> sub0(model.subcentroid(parent, 0).begin(),
                                 model.subcentroid(parent, 0).end());
  const std::vector<double> sub1(model.subcentroid(parent, 1).begin(),
                                 model.subcentroid(parent, 1).end());
  set_row(model.centroids, parent, sub0);
  model.centroids.insert_row(parent + 1, sub1);
  model.subcentroids.insert_row(2 * parent + 2, sub1);
  model.subcentroids.insert_row(2 * parent + 2, sub1);
  for (std::size_t i = 0; i < data.n(); ++i) {
    std::size_t& a = model.assignments[i];
    if (a > parent) {
      ++a;
    } else if (a == parent && model.subassignments[i] == 1) {
      a = parent + 1;
    }
  }

  std::vector<std::size_t> left, right;
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (model.assignments[i] == parent) left.push_back(i);
    if (model.assignments[i] == parent + 1) right.push_back(i);
  }
  reseed_subclusters(data, model, parent, left, rng);
  reseed_subclusters(data, model, parent + 1, right, rng);
  out.applied = true;
  return out;
}

MoveOutcome maybe_merge(const Dataset& data, ClusterModel& model,
                        const PrecisionInfo& precision) {
  MoveOutcome out;
  const std::size_t k = model.k();
  if (k < 2) return out;
  const std::size_t d = data.dim();

  std::size_t first = 0, second = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const double dist = squared_distance(model.centroids.row(a), model.centroids.row(b));
      if (dist < best) {
        best = dist;
        first = a;
        second = b;
      }
    }
  }

  std::vector<double> merged(d, 0.0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const std::size_t a = model.assignments[i];
    if (a != first && a != second) continue;
    const auto p = data.point(i);
    for (std::size_t j = 0; j < d; ++j) merged[j] += p[j];
    ++count;
  }
  for (double& v : merged) v /= static_cast<double>(count);

  double merged_ss = 0.0, first_ss = 0.0, second_ss = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const std::size_t a = model.assignments[i];
    if (a != first && a != second) continue;
    const auto p = data.point(i);
    merged_ss += squared_distance(p, merged);
    (a == first ? first_ss : second_ss) += squared_distance(p, model.centroids.row(a));
  }

  out.cluster = first;
  out.delta = merge_delta(merged_ss, first_ss, second_ss, k, data.n(), precision, d);
  if (!(out.delta < 0.0)) return out;

  // The two clusters become the subclusters of their union.
  const std::vector<double> first_centroid(model.centroids.row(first).begin(),
                                           model.centroids.row(first).end());
  const std::vector<double> second_centroid(model.centroids.row(second).begin(),
                                            model.centroids.row(second).end());
  set_row(model.centroids, first, merged);
  set_row(model.subcentroids, 2 * first, first_centroid);
  set_row(model.subcentroids, 2 * first + 1, second_centroid);
  model.centroids.erase_row(second);
  model.subcentroids.erase_row(2 * second + 1);
  model.subcentroids.erase_row(2 * second);
  for (std::size_t i = 0; i < data.n(); ++i) {
    std::size_t& a = model.assignments[i];
    if (a == first) {
      model.subassignments[i] = 0;
    } else if (a == second) {
      a = first;
      model.subassignments[i] = 1;
    } else if (a > second) {
      --a;
    }
  }
  out.applied = true;
  return out;
}

FitResult fit(const Dataset& data, const FitConfig& config, const StepObserver& observer) {
  if (config.patience < 1) throw ContractError("patience must be at least 1");
  if (!(config.min_improvement >= 0.0)) throw ContractError("min_improvement must be >= 0");

  const auto start = std::chrono::steady_clock::now();
  Rng rng(config.seed);
  const PrecisionInfo precision = precision_info(data);

  FitResult result;
  ClusterModel model = initial_model(data, rng);
  notify(observer, StepKind::kInit, 0, false, 0.0, model);

  double best_total = std::numeric_limits<double>::infinity();
  double patience_best = std::numeric_limits<double>::infinity();
  std::size_t unimproved = 0;

  for (std::size_t cycle = 1;; ++cycle) {
    if (cycle > config.max_cycles) {
      throw ConvergenceError("fit did not converge within " +
                             std::to_string(config.max_cycles) + " cycles");
    }

    bool changed = assign_step(data, model);
    notify(observer, StepKind::kAssign, cycle, changed, 0.0, model);
    bool reseeded = update_step(data, model, rng);
    notify(observer, StepKind::kUpdate, cycle, reseeded, 0.0, model);
    changed |= reseeded;

    const MoveOutcome split = maybe_split(data, model, precision, rng);
    MoveOutcome merge;
    if (split.applied) {
      ++result.split_count;
      notify(observer, StepKind::kSplit, cycle, true, split.delta, model);
    } else {
      const bool reassigned = assign_step(data, model);
      notify(observer, StepKind::kAssign, cycle, reassigned, 0.0, model);
      reseeded = update_step(data, model, rng);
      notify(observer, StepKind::kUpdate, cycle, reseeded, 0.0, model);
      changed |= reassigned || reseeded;

      merge = maybe_merge(data, model, precision);
      if (merge.applied) {
        ++result.merge_count;
        notify(observer, StepKind::kMerge, cycle, true, merge.delta, model);
      }
    }

    const MdlBreakdown cost = mdl_cost(data, model.centroids, model.assignments, precision);
    result.cost_trace.push_back(cost.total);
    result.n_cycles = cycle;
    if (cost.total < best_total) {
      best_total = cost.total;
      result.model = model;
      result.cost = cost;
    }

    if (cost.total < patience_best - config.min_improvement) {
      patience_best = cost.total;
      unimproved = 0;
    } else {
      ++unimproved;
    }

    const bool fixpoint = !changed && !split.applied && !merge.applied;
    if (fixpoint) break;
    if (!config.strict_convergence && unimproved >= config.patience) break;
  }

  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace kstar
