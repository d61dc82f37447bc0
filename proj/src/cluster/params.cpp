#include "vitalclust/cluster/params.hpp"

#include <stdexcept>

namespace vitalclust::cluster {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::KMeans: return "kmeans";
    case Algorithm::KMedoids: return "kmedoids";
    case Algorithm::KShape: return "kshape";
    case Algorithm::DBSCAN: return "dbscan";
  }
  throw std::logic_error("unknown algorithm enum");
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  if (name == "kmeans") return Algorithm::KMeans;
  if (name == "kmedoids") return Algorithm::KMedoids;
  if (name == "kshape") return Algorithm::KShape;
  if (name == "dbscan") return Algorithm::DBSCAN;
  return std::nullopt;
}

}  // namespace vitalclust::cluster
