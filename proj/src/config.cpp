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
#include "ocsim/io.hpp"

#include "ocsim/errors.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace ocsim::io
{

namespace
{

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

class KeyTable
{
public:
    using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

    void add(const std::string& key, Setter setter) { setters_.emplace(key, std::move(setter)); }

    void apply(RunConfig& cfg, const std::string& key, const std::string& value) const
    {
        const auto it = setters_.find(key);
        if (it == setters_.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        it->second(cfg, key, value);
    }

private:
    std::unordered_map<std::string, Setter> setters_;
};

long long parse_int(const std::string& key, const std::string& value)
{
    try {
        std::size_t consumed = 0;
        const long long v = std::stoll(value, &consumed);
        if (consumed != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t consumed = 0;
        const double v = std::stod(value, &consumed);
        if (consumed != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

const KeyTable& key_table()
{
    static const KeyTable table = [] {
        KeyTable t;
        auto str = [](std::string RunConfig::* field) {
            return [field](RunConfig& c, const std::string&, const std::string& v) { c.*field = v; };
        };

        // [paths]
        t.add("paths.nodes", str(&RunConfig::nodes_csv));
        t.add("paths.bom", str(&RunConfig::bom_csv));
        t.add("paths.regions", str(&RunConfig::regions_csv));
        t.add("paths.contacts", str(&RunConfig::contacts_csv));
        t.add("paths.actuals", str(&RunConfig::actuals_csv));

        // [run]
        t.add("run.seed", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.seed = static_cast<std::uint64_t>(parse_int(k, v));
        });
        t.add("run.horizon", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.horizon_days = static_cast<int>(parse_int(k, v));
        });
        t.add("run.replications", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.replications = static_cast<int>(parse_int(k, v));
        });
        t.add("run.out", str(&RunConfig::out_dir));
        t.add("run.start_date", str(&RunConfig::start_date));

        // [scenario]
        t.add("scenario.demand", [](RunConfig& c, const std::string&, const std::string& v) {
            c.spec.demand = scenario::parse_demand_scenario(v);
        });
        t.add("scenario.inventory", [](RunConfig& c, const std::string&, const std::string& v) {
            c.spec.inventory = scenario::parse_inventory_mode(v);
        });
        t.add("scenario.transport", [](RunConfig& c, const std::string&, const std::string& v) {
            c.spec.transport = scenario::parse_transport_strategy(v);
        });
        t.add("scenario.contact_uplift", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.spec.contact_uplift = parse_double(k, v);
        });
        t.add("scenario.contact_uplift_mode", [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "relative") {
                c.spec.contact_uplift_relative = true;
            } else if (v == "absolute") {
                c.spec.contact_uplift_relative = false;
            } else {
                throw ConfigError("key '" + k + "': expected relative or absolute, got '" + v + "'");
            }
        });
        t.add("scenario.usage_multiplier", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.spec.usage_multiplier = parse_double(k, v);
        });
        t.add("scenario.increased_inventory_rate", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.spec.increased_inventory_rate = parse_double(k, v);
        });

        // [epi]
        t.add("epi.illness_duration", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.illness_duration_days = static_cast<int>(parse_int(k, v));
        });
        t.add("epi.hospitalization_rate", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.hospitalization_rate = parse_double(k, v);
        });
        t.add("epi.los_min", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.los_min_days = static_cast<int>(parse_int(k, v));
        });
        t.add("epi.los_max", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.los_max_days = static_cast<int>(parse_int(k, v));
        });
        t.add("epi.overflow_los_min", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.overflow_los_min_days = static_cast<int>(parse_int(k, v));
        });
        t.add("epi.overflow_los_max", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.overflow_los_max_days = static_cast<int>(parse_int(k, v));
        });
        t.add("epi.immunity_duration", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.immunity_duration_days = static_cast<int>(parse_int(k, v));
        });
        t.add("epi.infectivity", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.infectivity = parse_double(k, v);
        });
        t.add("epi.hospital_mortality_rate", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.hospital_mortality_rate = parse_double(k, v);
        });
        t.add("epi.community_mortality_rate", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.epi_params.community_mortality_rate = parse_double(k, v);
        });
        t.add("epi.workforce_share", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.workforce_share = parse_double(k, v);
        });

        // [oc]
        t.add("oc.hospital_covid_usage", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.oc_rates.hospital_covid_usage = parse_double(k, v);
        });
        t.add("oc.discharge_usage", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.oc_rates.discharge_usage = parse_double(k, v);
        });
        t.add("oc.overflow_discharge_usage", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.oc_rates.overflow_discharge_usage = parse_double(k, v);
        });
        t.add("oc.inventory_rate", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.oc_rates.inventory_rate = parse_double(k, v);
        });
        t.add("oc.scrap_rate", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.oc_rates.scrap_rate = parse_double(k, v);
        });
        t.add("oc.units_per_bed", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.oc_rates.units_per_bed = parse_double(k, v);
        });
        t.add("oc.precovid_hospital_demand", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.oc_rates.precovid_hospital_demand_national = parse_double(k, v);
        });
        t.add("oc.precovid_home_demand", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.oc_rates.precovid_home_demand_national = parse_double(k, v);
        });
        t.add("oc.restock_delay_days", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.oc_rates.restock_delay_days = static_cast<int>(parse_int(k, v));
        });

        // [transport]
        t.add("transport.ground_speed", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.transit.ground_speed_mpd = parse_double(k, v);
        });
        t.add("transport.ground_handling", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.transit.ground_handling_days = parse_double(k, v);
        });
        t.add("transport.air_speed", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.transit.air_speed_mpd = parse_double(k, v);
        });
        t.add("transport.air_handling", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.transit.air_handling_days = parse_double(k, v);
        });
        t.add("transport.air_cutoff", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.transit.air_cutoff_miles = parse_double(k, v);
        });
        t.add("transport.lead_time_cv", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.lead_time_cv = parse_double(k, v);
        });
        t.add("transport.supplier_handling", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.supplier_handling_days = parse_double(k, v);
        });

        // [policy]
        t.add("policy.cycle_days", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sizing.cycle_days = parse_double(k, v);
        });
        t.add("policy.service_level", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sizing.service_level = parse_double(k, v);
        });
        t.add("policy.review_period_days", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.review_period_days = static_cast<int>(parse_int(k, v));
        });
        t.add("policy.sigma_d_cv", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sizing.sigma_d_cv = parse_double(k, v);
        });
        t.add("policy.assembly_lead_days", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sizing.assembly_lead_days = parse_double(k, v);
        });
        t.add("policy.assembly_sigma_lt", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sizing.assembly_sigma_lt_days = parse_double(k, v);
        });
        t.add("policy.part_lead_margin_days", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sizing.part_lead_margin_days = parse_double(k, v);
        });
        t.add("policy.sub_lead_days", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sizing.sub_lead_days = parse_double(k, v);
        });
        t.add("policy.sub_sigma_lt", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.sizing.sub_sigma_lt_days = parse_double(k, v);
        });

        // [des]
        t.add("des.split_unit_orders", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.split_unit_orders = parse_bool(k, v);
        });
        t.add("des.audit", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.audit = parse_bool(k, v);
        });
        t.add("des.assembly_rate", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.default_assembly_rate = parse_double(k, v);
        });
        t.add("des.subassembly_rate", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.default_subassembly_rate = parse_double(k, v);
        });
        t.add("des.raw_units_per_part", [](RunConfig& c, const std::string& k, const std::string& v) {
            c.engine.raw_units_per_part = parse_int(k, v);
        });
        return t;
    }();
    return table;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& label)
{
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') {
            continue;
        }
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw ConfigError(label + ":" + std::to_string(line_no) + ": malformed section header '" + s + "'");
            }
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(label + ":" + std::to_string(line_no) + ": expected 'key = value', got '" + s + "'");
        }
        std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(label + ":" + std::to_string(line_no) + ": empty key");
        }
        if (key.find('.') == std::string::npos && !section.empty()) {
            key = section + "." + key;
        }
        try {
            key_table().apply(cfg, key, value);
        } catch (const ConfigError& err) {
            throw ConfigError(label + ":" + std::to_string(line_no) + ": " + err.what());
        }
    }

    cfg.epi_params.validate();
    cfg.oc_rates.validate();
    cfg.spec.horizon_days = cfg.horizon_days;
    cfg.spec.seed = cfg.seed;
    cfg.spec.replications = cfg.replications;
    cfg.spec.validate();
    return cfg;
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

} // namespace ocsim::io
