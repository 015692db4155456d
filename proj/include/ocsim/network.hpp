/*
 * Copyright (C) 2026 ocsim contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef OCSIM_NETWORK_HPP
#define OCSIM_NETWORK_HPP

#include <string>
#include <unordered_map>
#include <vector>

namespace ocsim::net
{

enum class Role { supplier, subassembly, assembly, distributor };

enum class TransportMode { ground, air };

const char* role_name(Role role);
const char* mode_name(TransportMode mode);

struct FacilityNode {
    std::string node_id;
    Role role = Role::supplier;
    double lat = 0.0;
    double lon = 0.0;
    std::string region_id;        ///< distributors: served region; producers: home region if modeled
    double capacity_per_day = 0.0; ///< production rate for assembly/subassembly nodes
};

/// One of the four main assembly steps: the part type it consumes, how many
/// per finished unit, and the facility that produces the part.
struct BomStep {
    int step = 0;
    std::string part_type;
    long long qty_per_unit = 0;
    std::string producer_id;
};

struct TransitParams {
    double ground_speed_mpd = 500.0;
    double ground_handling_days = 0.25;
    double air_speed_mpd = 3000.0;
    double air_handling_days = 0.5;
    double air_cutoff_miles = 500.0;
};

/// A lane between two facilities. Ground is always available; air opens up
/// beyond the policy cutoff.
struct Route {
    std::string origin;
    std::string destination;
    double distance_miles = 0.0;
    bool air_available = false;
};

struct Network {
    std::vector<FacilityNode> nodes;
    std::vector<BomStep> bom; ///< exactly four steps, ordered by step number
    int assembly_index = -1;
    std::vector<int> distributor_indices;
    std::vector<int> subassembly_indices;
    std::vector<int> supplier_indices;
    std::unordered_map<std::string, int> index_by_id;
    /// Suppliers partitioned evenly across the part families (by sorted id,
    /// round-robin), giving every part type its upstream tier.
    std::vector<std::vector<int>> suppliers_by_part;

    const FacilityNode& node(int index) const { return nodes[static_cast<std::size_t>(index)]; }
    int index_of(const std::string& node_id) const;
    int part_index(const std::string& part_type) const;
};

/// Great-circle distance in miles (haversine, Earth radius 3,958.8 mi).
double distance_miles(const FacilityNode& a, const FacilityNode& b);

double transit_days(double distance_miles, TransportMode mode, const TransitParams& params);

Route route_between(const FacilityNode& origin, const FacilityNode& destination, const TransitParams& params);

/// Validates node and BOM lists: unique ids, exactly one assembly node,
/// exactly four BOM steps, no dangling producer references, valid coordinates.
/// Throws DataError with a distinct message per violation.
Network build_network(std::vector<FacilityNode> nodes, std::vector<BomStep> bom);

/// Loads `nodes.csv` (node_id,role,lat,lon,region_id,capacity) and `bom.csv`
/// (step,part_type,qty_per_unit,producer_id), then validates.
Network load_network(const std::string& nodes_csv_path, const std::string& bom_csv_path);

} // namespace ocsim::net

#endif
