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
#include "ocsim/network.hpp"

#include "ocsim/csv.hpp"
#include "ocsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ocsim::net
{

namespace
{

constexpr double kEarthRadiusMiles = 3958.8;
constexpr int kBomSteps = 4;

Role parse_role(const std::string& text, const std::string& where)
{
    if (text == "supplier") return Role::supplier;
    if (text == "subassembly") return Role::subassembly;
    if (text == "assembly") return Role::assembly;
    if (text == "distributor") return Role::distributor;
    throw DataError(where + ": unknown facility role '" + text + "'");
}

} // namespace

const char* role_name(Role role)
{
    switch (role) {
    case Role::supplier: return "supplier";
    case Role::subassembly: return "subassembly";
    case Role::assembly: return "assembly";
    case Role::distributor: return "distributor";
    }
    return "?";
}

const char* mode_name(TransportMode mode)
{
    return mode == TransportMode::ground ? "ground" : "air";
}

int Network::index_of(const std::string& node_id) const
{
    const auto it = index_by_id.find(node_id);
    if (it == index_by_id.end()) {
        throw DataError("unknown facility '" + node_id + "'");
    }
    return it->second;
}

int Network::part_index(const std::string& part_type) const
{
    for (std::size_t i = 0; i < bom.size(); ++i) {
        if (bom[i].part_type == part_type) {
            return static_cast<int>(i);
        }
    }
    throw DataError("unknown part type '" + part_type + "'");
}

double distance_miles(const FacilityNode& a, const FacilityNode& b)
{
    constexpr double deg = std::numbers::pi / 180.0;
    const double lat1 = a.lat * deg;
    const double lat2 = b.lat * deg;
    const double dlat = (b.lat - a.lat) * deg;
    const double dlon = (b.lon - a.lon) * deg;

    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

double transit_days(double distance, TransportMode mode, const TransitParams& params)
{
    if (distance < 0.0) {
        throw ConfigError("transit_days: negative distance");
    }
    if (mode == TransportMode::ground) {
        return params.ground_handling_days + distance / params.ground_speed_mpd;
    }
    return params.air_handling_days + distance / params.air_speed_mpd;
}

Route route_between(const FacilityNode& origin, const FacilityNode& destination, const TransitParams& params)
{
    Route route;
    route.origin = origin.node_id;
    route.destination = destination.node_id;
    route.distance_miles = distance_miles(origin, destination);
    route.air_available = route.distance_miles > params.air_cutoff_miles;
    return route;
}

Network build_network(std::vector<FacilityNode> nodes, std::vector<BomStep> bom)
{
    Network net;
    net.nodes = std::move(nodes);
    net.bom = std::move(bom);

    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        const FacilityNode& node = net.nodes[i];
        if (node.node_id.empty()) {
            throw DataError("nodes: empty node_id");
        }
        if (std::abs(node.lat) > 90.0 || std::abs(node.lon) > 180.0) {
            throw DataError("node " + node.node_id + ": coordinates out of range");
        }
        if (!net.index_by_id.emplace(node.node_id, static_cast<int>(i)).second) {
            throw DataError("duplicate node_id '" + node.node_id + "'");
        }
        switch (node.role) {
        case Role::assembly:
            if (net.assembly_index >= 0) {
                throw DataError("multiple assembly facilities ('" +
                                net.nodes[static_cast<std::size_t>(net.assembly_index)].node_id + "', '" +
                                node.node_id + "')");
            }
            net.assembly_index = static_cast<int>(i);
            break;
        case Role::distributor:
            if (node.region_id.empty()) {
                throw DataError("distributor " + node.node_id + ": missing region_id");
            }
            net.distributor_indices.push_back(static_cast<int>(i));
            break;
        case Role::subassembly:
            net.subassembly_indices.push_back(static_cast<int>(i));
            break;
        case Role::supplier:
            net.supplier_indices.push_back(static_cast<int>(i));
            break;
        }
    }

    if (net.assembly_index < 0) {
        throw DataError("no assembly facility in the node file");
    }

    // One region per distributor, one distributor per region.
    std::unordered_map<std::string, int> region_seen;
    for (int d : net.distributor_indices) {
        const auto& node = net.node(d);
        if (!region_seen.emplace(node.region_id, d).second) {
            throw DataError("region '" + node.region_id + "' served by more than one distributor");
        }
    }

    if (static_cast<int>(net.bom.size()) != kBomSteps) {
        throw DataError("bill of materials must have exactly " + std::to_string(kBomSteps) + " steps, got " +
                        std::to_string(net.bom.size()));
    }
    std::sort(net.bom.begin(), net.bom.end(), [](const BomStep& a, const BomStep& b) { return a.step < b.step; });
    for (int s = 0; s < kBomSteps; ++s) {
        const BomStep& step = net.bom[static_cast<std::size_t>(s)];
        if (step.step != s + 1) {
            throw DataError("bill of materials: steps must be numbered 1..4");
        }
        if (step.qty_per_unit < 1) {
            throw DataError("bill of materials: step " + std::to_string(step.step) + " quantity must be >= 1");
        }
        const auto it = net.index_by_id.find(step.producer_id);
        if (it == net.index_by_id.end()) {
            throw DataError("bill of materials: dangling producer reference '" + step.producer_id + "'");
        }
        if (net.node(it->second).role != Role::subassembly) {
            throw DataError("bill of materials: producer '" + step.producer_id + "' is not a subassembly facility");
        }
        for (int t = 0; t < s; ++t) {
            if (net.bom[static_cast<std::size_t>(t)].part_type == step.part_type) {
                throw DataError("bill of materials: duplicate part type '" + step.part_type + "'");
            }
        }
    }

    // Even supplier partition across the four part families, by sorted id.
    std::vector<int> sorted_suppliers = net.supplier_indices;
    std::sort(sorted_suppliers.begin(), sorted_suppliers.end(), [&](int a, int b) {
        return net.node(a).node_id < net.node(b).node_id;
    });
    net.suppliers_by_part.assign(kBomSteps, {});
    for (std::size_t i = 0; i < sorted_suppliers.size(); ++i) {
        net.suppliers_by_part[i % kBomSteps].push_back(sorted_suppliers[i]);
    }
    for (int p = 0; p < kBomSteps; ++p) {
        if (!net.supplier_indices.empty() && net.suppliers_by_part[static_cast<std::size_t>(p)].empty()) {
            throw DataError("part type '" + net.bom[static_cast<std::size_t>(p)].part_type +
                            "' has no upstream suppliers");
        }
    }

    return net;
}

Network load_network(const std::string& nodes_csv_path, const std::string& bom_csv_path)
{
    const csv::Table node_table = csv::read_file(nodes_csv_path, "node_id,role,lat,lon,region_id,capacity");
    std::vector<FacilityNode> nodes;
    nodes.reserve(node_table.rows.size());
    for (std::size_t r = 0; r < node_table.rows.size(); ++r) {
        FacilityNode node;
        node.node_id = node_table.rows[r][0];
        node.role = parse_role(node_table.rows[r][1], nodes_csv_path + " row " + std::to_string(r + 2));
        node.lat = csv::to_double(node_table, r, 2);
        node.lon = csv::to_double(node_table, r, 3);
        node.region_id = node_table.rows[r][4];
        node.capacity_per_day = node_table.rows[r][5].empty() ? 0.0 : csv::to_double(node_table, r, 5);
        nodes.push_back(std::move(node));
    }

    const csv::Table bom_table = csv::read_file(bom_csv_path, "step,part_type,qty_per_unit,producer_id");
    std::vector<BomStep> bom;
    bom.reserve(bom_table.rows.size());
    for (std::size_t r = 0; r < bom_table.rows.size(); ++r) {
        BomStep step;
        step.step = static_cast<int>(csv::to_int(bom_table, r, 0));
        step.part_type = bom_table.rows[r][1];
        step.qty_per_unit = csv::to_int(bom_table, r, 2);
        step.producer_id = bom_table.rows[r][3];
        bom.push_back(std::move(step));
    }

    return build_network(std::move(nodes), std::move(bom));
}

} // namespace ocsim::net
