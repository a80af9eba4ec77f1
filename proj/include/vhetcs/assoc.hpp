#pragma once

#include <span>
#include <vector>

#include "vhetcs/network.hpp"

namespace vhetcs {

// kLiteral: a UE may only join its single highest-SINR BS, and stays
// unconnected if that BS fails the capacity or sensitivity test.
// kFallback: the UE walks down its SINR ranking until some BS accepts it.
enum class AssociationRule { kLiteral, kFallback };

struct AssociationResult {
  std::vector<int> serving;             // BS index per UE, -1 if unconnected
  std::vector<int> unconnected;         // UE indices with an all-zero row
  std::vector<int> residual_capacity;   // RBs left per BS

  // Entry U_{i,j} of the association matrix.
  bool u(int ue, int bs) const { return serving[static_cast<std::size_t>(ue)] == bs; }
};

// Active BSs ranked for one UE: SINR descending, ties to the lower index.
std::vector<int> sinr_ranking(const LinkMatrix& links, int ue);

// UEs are processed in ascending index order against running residual
// capacities. A BS admits a UE when its residual capacity covers the UE's
// demand and the received power meets the UE's sensitivity.
AssociationResult associate(std::span<const UserEquipment> ues, const LinkMatrix& links,
                            std::span<const int> capacities,
                            AssociationRule rule = AssociationRule::kLiteral);

int connected_count(const AssociationResult& result);

}  // namespace vhetcs
