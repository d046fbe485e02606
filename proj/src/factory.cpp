#include "rnewton/manifolds/factory.hpp"

#include "rnewton/manifolds/euclidean.hpp"
#include "rnewton/manifolds/hyperboloid.hpp"
#include "rnewton/manifolds/spd.hpp"
#include "rnewton/manifolds/sphere.hpp"

namespace rnewton {

ManifoldKind manifold_kind_from_string(const std::string& s) {
  if (s == "euclidean") return ManifoldKind::euclidean;
  if (s == "sphere") return ManifoldKind::sphere;
  if (s == "spd") return ManifoldKind::spd;
  if (s == "hyperboloid") return ManifoldKind::hyperboloid;
  throw DimensionError("unknown manifold kind: " + s);
}

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::euclidean: return "euclidean";
    case ManifoldKind::sphere: return "sphere";
    case ManifoldKind::spd: return "spd";
    case ManifoldKind::hyperboloid: return "hyperboloid";
  }
  return "unknown";
}

std::shared_ptr<const Manifold> make_manifold(ManifoldKind kind, int dim) {
  switch (kind) {
    case ManifoldKind::euclidean:
      return std::make_shared<EuclideanManifold>(dim);
    case ManifoldKind::sphere:
      return std::make_shared<SphereManifold>(dim);
    case ManifoldKind::spd:
      return std::make_shared<SpdManifold>(dim);
    case ManifoldKind::hyperboloid:
      return std::make_shared<HyperboloidManifold>(dim);
  }
  throw DimensionError("unknown manifold kind");
}

}  // namespace rnewton
