#pragma once

#include "cukit/instances.hpp"

namespace cukit::test {

/// ExtNat with way_below replaced by the order: claims inf << inf.
inline CuInstance<ExtNat> way_below_is_order() {
  auto inst = extnat_instance();
  inst.name = "extnat/way-below-is-order";
  inst.way_below = [](const ExtNat& a, const ExtNat& b) { return leq(a, b); };
  return inst;
}

/// ExtNat whose way_below refuses finite elements above 100, so sums of
/// way-below pairs drawn up to 60 escape the relation.
inline CuInstance<ExtNat> capped_way_below() {
  auto inst = extnat_instance();
  inst.name = "extnat/capped-way-below";
  inst.way_below = [](const ExtNat& a, const ExtNat& b) {
    return way_below(a, b) && a.value() <= 100;
  };
  return inst;
}

inline Sampler<ExtNat> capped_sampler() { return extnat_sampler({60, 0.15}); }

}  // namespace cukit::test
