#include "vhetcs/assoc.hpp"

#include <algorithm>
#include <stdexcept>

namespace vhetcs {

std::vector<int> sinr_ranking(const LinkMatrix& links, int ue) {
  std::vector<int> order;
  for (int j = 0; j < links.num_bs(); ++j)
    if (links.active[static_cast<std::size_t>(j)]) order.push_back(j);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return links.at(ue, a).sinr_db > links.at(ue, b).sinr_db;
  });
  return order;
}

AssociationResult associate(std::span<const UserEquipment> ues, const LinkMatrix& links,
                            std::span<const int> capacities, AssociationRule rule) {
  if (links.num_ues() != static_cast<int>(ues.size()) ||
      links.num_bs() != static_cast<int>(capacities.size()))
    throw std::domain_error("link budgets do not cover every UE/BS pair");

  AssociationResult result;
  result.serving.assign(ues.size(), -1);
  result.residual_capacity.assign(capacities.begin(), capacities.end());

  for (int i = 0; i < static_cast<int>(ues.size()); ++i) {
    const auto& ue = ues[static_cast<std::size_t>(i)];
    const auto ranking = sinr_ranking(links, i);
    for (int j : ranking) {
      auto& residual = result.residual_capacity[static_cast<std::size_t>(j)];
      const bool has_room = residual >= ue.demand_rb;
      const bool audible = links.at(i, j).rx_power_dbm >= ue.rx_sensitivity_dbm;
      if (has_room && audible) {
        residual -= ue.demand_rb;
        result.serving[static_cast<std::size_t>(i)] = j;
        break;
      }
      if (rule == AssociationRule::kLiteral) break;
    }
    if (result.serving[static_cast<std::size_t>(i)] < 0) result.unconnected.push_back(i);
  }
  return result;
}

int connected_count(const AssociationResult& result) {
  return static_cast<int>(std::count_if(result.serving.begin(), result.serving.end(),
                                        [](int j) { return j >= 0; }));
}

}  // namespace vhetcs
