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
#include "ocsim/des.hpp"

#include "ocsim/errors.hpp"
#include "ocsim/rng.hpp"
#include "ocsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

namespace ocsim::des
{

const char* order_class_name(OrderClass klass)
{
    switch (klass) {
    case OrderClass::customer: return "customer";
    case OrderClass::distributor_replenishment: return "distributor_replenishment";
    case OrderClass::assembly_parts: return "assembly_parts";
    }
    return "?";
}

QrPair qr_parameters(const PolicyInputs& in)
{
    if (in.alpha < 0.5 || in.alpha >= 1.0) {
        throw ConfigError("qr_parameters: service level must lie in [0.5, 1)");
    }
    if (in.mu_d < 0.0 || in.cycle_days < 0.0 || in.mu_lt < 0.0 || in.sigma_d < 0.0 || in.sigma_lt < 0.0) {
        throw ConfigError("qr_parameters: negative policy input");
    }
    const double z = stats::normal_quantile(in.alpha);
    const double safety = z * std::sqrt(in.mu_lt * in.sigma_d * in.sigma_d + in.mu_d * in.mu_d * in.sigma_lt * in.sigma_lt);

    QrPair qr;
    qr.q = std::max(1LL, static_cast<long long>(std::ceil(in.mu_d * in.cycle_days)));
    qr.r = std::max(0LL, static_cast<long long>(std::ceil(in.mu_d * in.mu_lt + safety)));
    return qr;
}

long long reorder_count(long long position, const QrPair& qr)
{
    if (position >= qr.r) {
        return 0;
    }
    const long long deficit = qr.r - position;
    return (deficit + qr.q - 1) / qr.q;
}

net::TransportMode select_mode(double distance_miles, TransportStrategy strategy, double cutoff_miles)
{
    if (strategy == TransportStrategy::air_over_500 && distance_miles > cutoff_miles) {
        return net::TransportMode::air;
    }
    return net::TransportMode::ground;
}

namespace
{

enum class StoreType { distributor_oc, assembly_oc, assembly_part, sub_part, sub_raw };

struct BacklogEntry {
    std::uint64_t id = 0; ///< order id, or job id for part/raw needs
    long long qty = 0;
    bool is_job_need = false;
};

struct Store {
    std::string key;
    StoreType type = StoreType::distributor_oc;
    int node = -1; ///< owning facility
    int part = -1; ///< BOM part index for part stores

    long long on_hand = 0;
    long long on_order = 0;
    long long backlog_qty = 0;
    std::deque<BacklogEntry> backlog;

    bool has_policy = false;
    PolicyInputs inputs;
    QrPair qr;

    long long demand_today = 0;
    std::deque<long long> demand_window;

    // Second route to the inventory position, kept by the demand/placement
    // handlers only; the audit compares it against on_hand + on_order - backlog.
    long long position_tracked = 0;

    long long flow_initial = 0;
    long long flow_received = 0;
    long long flow_produced = 0;
    long long flow_shipped = 0;
    long long flow_consumed = 0;

    long long position() const { return on_hand + on_order - backlog_qty; }
};

struct Job {
    std::uint64_t id = 0;
    int output_store = -1;
    int facility = -1;
    long long qty = 0;
    int outstanding_needs = 0;
};

struct Event {
    double t = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::demand_signal_tick;
    int store = -1;
    std::uint64_t id = 0; ///< order or job id
    long long qty = 0;
    int day = 0;
};

struct EventCmp {
    bool operator()(const Event& a, const Event& b) const
    {
        if (a.t != b.t) {
            return a.t > b.t;
        }
        return a.seq > b.seq;
    }
};

struct Production {
    int facility = -1;
    double capacity = 0.0;
    double free_at = 0.0;
    std::deque<std::uint64_t> ready_jobs;
    std::vector<double> busy_by_day;
    int wf_region = -1; ///< index into regions, -1 = national average
};

class Engine
{
public:
    Engine(const net::Network& network, const EngineConfig& config, const PolicyPlan& plan,
           const std::vector<std::string>& regions, const std::vector<double>& region_weights,
           const std::unordered_map<std::string, std::vector<DailyRegionInput>>& signals, int horizon,
           std::uint64_t seed)
        : net_(network), cfg_(config), regions_(regions), weights_(region_weights), horizon_(horizon),
          seed_(seed)
    {
        result_.manufacturer_daily_order_qty.assign(static_cast<std::size_t>(horizon_), 0);
        build_stores(plan);
        bind_signals(signals);
        compute_workforce();
    }

    RunResult execute()
    {
        for (int d = 0; d < horizon_; ++d) {
            schedule(static_cast<double>(d), EventKind::demand_signal_tick, -1, 0, 0, d);
        }
        if (cfg_.inventory == InventoryMode::dynamic_policy) {
            for (int d = cfg_.review_period_days; d < horizon_; d += cfg_.review_period_days) {
                schedule(static_cast<double>(d), EventKind::policy_review, -1, 0, 0, d);
            }
        }

        while (!queue_.empty() && queue_.top().t <= static_cast<double>(horizon_)) {
            const Event ev = queue_.top();
            queue_.pop();
            if (cfg_.record_event_trace) {
                result_.event_trace.push_back(EventRecord{ev.t, ev.seq, ev.kind});
            }
            dispatch(ev);
            ++result_.event_count;
            if (cfg_.audit) {
                audit();
            }
        }

        finalize();
        return std::move(result_);
    }

private:
    const net::Network& net_;
    EngineConfig cfg_;
    std::vector<std::string> regions_;
    std::vector<double> weights_;
    int horizon_;
    std::uint64_t seed_;

    std::vector<Store> stores_;
    std::unordered_map<std::string, int> store_by_key_;
    std::vector<const std::vector<DailyRegionInput>*> region_signals_;
    std::unordered_map<std::string, int> region_index_;
    std::vector<int> region_distributor_store_;
    std::vector<double> national_wf_; ///< per day
    std::vector<Production> production_;
    std::unordered_map<int, int> production_by_node_;

    std::priority_queue<Event, std::vector<Event>, EventCmp> queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_job_id_ = 1;
    std::vector<Order> orders_;
    std::vector<int> order_home_store_; ///< store receiving the goods; -1 for customer orders
    std::unordered_map<std::uint64_t, Job> jobs_;
    RunResult result_;

    // ---- construction -----------------------------------------------------

    int add_store(std::string key, StoreType type, int node, int part)
    {
        Store s;
        s.key = std::move(key);
        s.type = type;
        s.node = node;
        s.part = part;
        stores_.push_back(std::move(s));
        const int idx = static_cast<int>(stores_.size()) - 1;
        store_by_key_.emplace(stores_.back().key, idx);
        return idx;
    }

    void build_stores(const PolicyPlan& plan)
    {
        for (int d : net_.distributor_indices) {
            add_store(net_.node(d).node_id, StoreType::distributor_oc, d, -1);
        }
        const int asm_node = net_.assembly_index;
        add_store(net_.node(asm_node).node_id, StoreType::assembly_oc, asm_node, -1);
        for (std::size_t p = 0; p < net_.bom.size(); ++p) {
            add_store(net_.node(asm_node).node_id + "#part:" + net_.bom[p].part_type, StoreType::assembly_part,
                      asm_node, static_cast<int>(p));
        }
        std::unordered_map<std::string, int> producer_part_count;
        for (std::size_t p = 0; p < net_.bom.size(); ++p) {
            const std::string& producer = net_.bom[p].producer_id;
            if (++producer_part_count[producer] > 1) {
                throw ConfigError("engine: facility '" + producer + "' produces more than one part type");
            }
            const int node = net_.index_of(producer);
            add_store(producer, StoreType::sub_part, node, static_cast<int>(p));
            add_store(producer + "#raw", StoreType::sub_raw, node, static_cast<int>(p));
        }

        for (const auto& [key, inputs] : plan.inputs) {
            const auto it = store_by_key_.find(key);
            if (it == store_by_key_.end()) {
                throw ConfigError("policy plan references unknown store '" + key + "'");
            }
            Store& s = stores_[static_cast<std::size_t>(it->second)];
            s.has_policy = true;
            s.inputs = inputs;
            s.qr = qr_parameters(inputs);
        }
        for (const auto& [key, qty] : plan.initial_on_hand) {
            if (store_by_key_.find(key) == store_by_key_.end()) {
                throw ConfigError("initial stock references unknown store '" + key + "'");
            }
        }
        for (Store& s : stores_) {
            const auto it = plan.initial_on_hand.find(s.key);
            if (it != plan.initial_on_hand.end()) {
                s.on_hand = it->second;
            } else if (s.has_policy) {
                s.on_hand = s.qr.q + s.qr.r;
            }
            s.position_tracked = s.on_hand;
            s.flow_initial = s.on_hand;
        }

        // Production lines for the assembly node and each subassembly producer.
        auto add_production = [&](int node, double fallback_rate) {
            Production p;
            p.facility = node;
            p.capacity = net_.node(node).capacity_per_day > 0.0 ? net_.node(node).capacity_per_day : fallback_rate;
            p.busy_by_day.assign(static_cast<std::size_t>(horizon_), 0.0);
            const std::string& region = net_.node(node).region_id;
            for (std::size_t r = 0; r < regions_.size(); ++r) {
                if (regions_[r] == region) {
                    p.wf_region = static_cast<int>(r);
                }
            }
            production_.push_back(std::move(p));
            production_by_node_.emplace(node, static_cast<int>(production_.size()) - 1);
        };
        add_production(asm_node, cfg_.default_assembly_rate);
        for (const Store& s : stores_) {
            if (s.type == StoreType::sub_part) {
                add_production(s.node, cfg_.default_subassembly_rate);
            }
        }
    }

    void bind_signals(const std::unordered_map<std::string, std::vector<DailyRegionInput>>& signals)
    {
        region_signals_.resize(regions_.size(), nullptr);
        region_distributor_store_.resize(regions_.size(), -1);
        if (weights_.size() != regions_.size()) {
            throw ConfigError("engine: region weight list does not match region list");
        }
        for (std::size_t r = 0; r < regions_.size(); ++r) {
            region_index_.emplace(regions_[r], static_cast<int>(r));
            const auto it = signals.find(regions_[r]);
            if (it == signals.end() || static_cast<int>(it->second.size()) < horizon_) {
                throw DataError("engine: demand signals missing for region '" + regions_[r] + "'");
            }
            region_signals_[r] = &it->second;
            for (int d : net_.distributor_indices) {
                if (net_.node(d).region_id == regions_[r]) {
                    region_distributor_store_[r] = store_by_key_.at(net_.node(d).node_id);
                }
            }
            if (region_distributor_store_[r] < 0) {
                throw DataError("engine: no distributor serves region '" + regions_[r] + "'");
            }
        }
    }

    void compute_workforce()
    {
        national_wf_.assign(static_cast<std::size_t>(horizon_), 0.0);
        for (int d = 0; d < horizon_; ++d) {
            double acc = 0.0;
            for (std::size_t r = 0; r < regions_.size(); ++r) {
                acc += weights_[r] * (*region_signals_[r])[static_cast<std::size_t>(d)].workforce_out_fraction;
            }
            national_wf_[static_cast<std::size_t>(d)] = acc;
        }
    }

    // ---- helpers ----------------------------------------------------------

    void schedule(double t, EventKind kind, int store, std::uint64_t id, long long qty, int day = 0)
    {
        queue_.push(Event{t, next_seq_++, kind, store, id, qty, day});
    }

    Order& order(std::uint64_t id) { return orders_[static_cast<std::size_t>(id - 1)]; }

    std::uint64_t new_order(OrderClass klass, std::string origin, std::string destination, long long qty,
                            double placed_at, int home_store)
    {
        Order o;
        o.order_id = static_cast<std::uint64_t>(orders_.size()) + 1;
        o.klass = klass;
        o.origin = std::move(origin);
        o.destination = std::move(destination);
        o.qty = qty;
        o.placed_at = placed_at;
        orders_.push_back(std::move(o));
        order_home_store_.push_back(home_store);
        return orders_.back().order_id;
    }

    double workforce_out(int production_idx, int day) const
    {
        const Production& p = production_[static_cast<std::size_t>(production_idx)];
        const int d = std::clamp(day, 0, horizon_ - 1);
        if (p.wf_region >= 0) {
            return (*region_signals_[static_cast<std::size_t>(p.wf_region)])[static_cast<std::size_t>(d)]
                .workforce_out_fraction;
        }
        return national_wf_[static_cast<std::size_t>(d)];
    }

    double effective_rate(int production_idx, double t) const
    {
        const Production& p = production_[static_cast<std::size_t>(production_idx)];
        const double wf = workforce_out(production_idx, static_cast<int>(t));
        return std::max(0.01 * p.capacity, p.capacity * (1.0 - wf));
    }

    void add_busy(Production& p, double start, double end)
    {
        int d = std::max(0, static_cast<int>(start));
        while (d < horizon_ && static_cast<double>(d) < end) {
            const double lo = std::max(start, static_cast<double>(d));
            const double hi = std::min(end, static_cast<double>(d + 1));
            if (hi > lo) {
                p.busy_by_day[static_cast<std::size_t>(d)] += hi - lo;
            }
            ++d;
        }
    }

    double transit_noise(std::uint64_t order_id)
    {
        if (cfg_.lead_time_cv <= 0.0) {
            return 1.0;
        }
        rng::Stream stream(seed_, rng::kStreamLeadTime, order_id, 0);
        double u = stream.unit();
        u = std::clamp(u, 1e-12, 1.0 - 1e-12);
        return std::max(0.1, 1.0 + cfg_.lead_time_cv * stats::normal_quantile(u));
    }

    // ---- inventory mechanics ----------------------------------------------

    /// Serve an order or job need arriving at `store`: fill from stock or queue
    /// it, then run the reorder check.
    void on_demand(int store_idx, const BacklogEntry& entry, double now)
    {
        Store& s = stores_[static_cast<std::size_t>(store_idx)];
        s.demand_today += entry.qty;
        s.position_tracked -= entry.qty;
        if (s.backlog.empty() && s.on_hand >= entry.qty) {
            fill(store_idx, entry, now);
        } else {
            s.backlog.push_back(entry);
            s.backlog_qty += entry.qty;
        }
        reorder_check(store_idx, now);
    }

    /// Complete one backlog-or-direct fill. The caller has already checked stock.
    void fill(int store_idx, const BacklogEntry& entry, double now)
    {
        Store& s = stores_[static_cast<std::size_t>(store_idx)];
        s.on_hand -= entry.qty;
        if (entry.is_job_need) {
            s.flow_consumed += entry.qty;
            Job& job = jobs_.at(entry.id);
            if (--job.outstanding_needs == 0) {
                job_ready(job, now);
            }
            return;
        }
        Order& o = order(entry.id);
        switch (s.type) {
        case StoreType::distributor_oc:
            // Customer fulfillment is the dispatch-ready time at the distributor.
            o.fulfilled_at = now;
            s.flow_shipped += entry.qty;
            break;
        case StoreType::assembly_oc:
        case StoreType::sub_part:
            s.flow_shipped += entry.qty;
            schedule(now, EventKind::shipment_departure, order_home_store_[entry.id - 1], entry.id, entry.qty);
            break;
        default:
            throw InvariantError("order fill routed to a store that cannot serve orders");
        }
    }

    void drain_backlog(int store_idx, double now)
    {
        Store& s = stores_[static_cast<std::size_t>(store_idx)];
        while (!s.backlog.empty()) {
            const BacklogEntry entry = s.backlog.front();
            if (s.on_hand < entry.qty) {
                break; // strict FIFO, no partial fills
            }
            s.backlog.pop_front();
            s.backlog_qty -= entry.qty;
            fill(store_idx, entry, now);
        }
    }

    void reorder_check(int store_idx, double now)
    {
        Store& s = stores_[static_cast<std::size_t>(store_idx)];
        if (!s.has_policy) {
            return;
        }
        const long long n_orders = reorder_count(s.position(), s.qr);
        for (long long k = 0; k < n_orders; ++k) {
            place_upstream(store_idx, s.qr.q, now);
        }
    }

    void place_upstream(int store_idx, long long qty, double now)
    {
        Store& s = stores_[static_cast<std::size_t>(store_idx)];
        s.on_order += qty;
        s.position_tracked += qty;
        switch (s.type) {
        case StoreType::distributor_oc: {
            const int target = store_by_key_.at(net_.node(net_.assembly_index).node_id);
            const std::uint64_t id = new_order(OrderClass::distributor_replenishment, s.key,
                                               net_.node(net_.assembly_index).node_id, qty, now, store_idx);
            const int day = std::clamp(static_cast<int>(now), 0, horizon_ - 1);
            result_.manufacturer_daily_order_qty[static_cast<std::size_t>(day)] += qty;
            schedule(now, EventKind::replenishment_order_arrival, target, id, qty);
            break;
        }
        case StoreType::assembly_oc: {
            create_assembly_job(store_idx, qty, now);
            break;
        }
        case StoreType::assembly_part: {
            const std::string& producer = net_.bom[static_cast<std::size_t>(s.part)].producer_id;
            const std::uint64_t id =
                new_order(OrderClass::assembly_parts, net_.node(s.node).node_id, producer, qty, now, store_idx);
            schedule(now, EventKind::replenishment_order_arrival, store_by_key_.at(producer), id, qty);
            break;
        }
        case StoreType::sub_part: {
            create_subassembly_job(store_idx, qty, now);
            break;
        }
        case StoreType::sub_raw: {
            const int supplier = nearest_supplier(s);
            const std::uint64_t id = new_order(OrderClass::assembly_parts, net_.node(s.node).node_id + "#raw",
                                               net_.node(supplier).node_id, qty, now, store_idx);
            // Suppliers hold no modeled stock; they dispatch after a handling
            // delay stretched by national workforce illness.
            const double wf = national_wf_[static_cast<std::size_t>(std::clamp(static_cast<int>(now), 0, horizon_ - 1))];
            const double dispatch = cfg_.supplier_handling_days / std::max(0.05, 1.0 - wf);
            schedule(now + dispatch, EventKind::shipment_departure, store_idx, id, qty);
            break;
        }
        }
    }

    int nearest_supplier(const Store& raw_store) const
    {
        const auto& pool = net_.suppliers_by_part[static_cast<std::size_t>(raw_store.part)];
        if (pool.empty()) {
            throw DataError("no suppliers for part '" + net_.bom[static_cast<std::size_t>(raw_store.part)].part_type +
                            "'");
        }
        int best = pool.front();
        double best_dist = net::distance_miles(net_.node(raw_store.node), net_.node(best));
        for (int cand : pool) {
            const double dist = net::distance_miles(net_.node(raw_store.node), net_.node(cand));
            if (dist < best_dist || (dist == best_dist && net_.node(cand).node_id < net_.node(best).node_id)) {
                best = cand;
                best_dist = dist;
            }
        }
        return best;
    }

    // ---- production -------------------------------------------------------

    void create_assembly_job(int oc_store_idx, long long qty, double now)
    {
        Job job;
        job.id = next_job_id_++;
        job.output_store = oc_store_idx;
        job.facility = stores_[static_cast<std::size_t>(oc_store_idx)].node;
        job.qty = qty;
        job.outstanding_needs = static_cast<int>(net_.bom.size());
        jobs_.emplace(job.id, job);

        // Parts are demanded from the local part stocks; shortfalls backlog
        // against those stocks whose own policies pull from the producers.
        for (std::size_t p = 0; p < net_.bom.size(); ++p) {
            const std::string key = net_.node(job.facility).node_id + "#part:" + net_.bom[p].part_type;
            const int part_store = store_by_key_.at(key);
            on_demand(part_store, BacklogEntry{job.id, qty * net_.bom[p].qty_per_unit, true}, now);
        }
    }

    void create_subassembly_job(int part_store_idx, long long qty, double now)
    {
        Job job;
        job.id = next_job_id_++;
        job.output_store = part_store_idx;
        job.facility = stores_[static_cast<std::size_t>(part_store_idx)].node;
        job.qty = qty;
        job.outstanding_needs = 1;
        jobs_.emplace(job.id, job);

        const int raw_store = store_by_key_.at(net_.node(job.facility).node_id + "#raw");
        on_demand(raw_store, BacklogEntry{job.id, qty * cfg_.raw_units_per_part, true}, now);
    }

    void job_ready(Job& job, double now)
    {
        Production& line = production_[static_cast<std::size_t>(production_by_node_.at(job.facility))];
        line.ready_jobs.push_back(job.id);
        try_start_production(line, now);
    }

    void try_start_production(Production& line, double now)
    {
        if (line.ready_jobs.empty() || line.free_at > now) {
            return;
        }
        const std::uint64_t job_id = line.ready_jobs.front();
        line.ready_jobs.pop_front();
        const Job& job = jobs_.at(job_id);
        const int prod_idx = production_by_node_.at(job.facility);
        const double rate = effective_rate(prod_idx, now);
        const double duration = static_cast<double>(job.qty) / rate;
        line.free_at = now + duration;
        add_busy(line, now, line.free_at);
        schedule(line.free_at, EventKind::assembly_job_complete, job.output_store, job_id, job.qty);
    }

    // ---- event handlers ---------------------------------------------------

    void dispatch(const Event& ev)
    {
        switch (ev.kind) {
        case EventKind::demand_signal_tick: handle_tick(ev); break;
        case EventKind::policy_review: handle_review(ev); break;
        case EventKind::customer_order_arrival:
        case EventKind::replenishment_order_arrival:
            on_demand(ev.store, BacklogEntry{ev.id, ev.qty, false}, ev.t);
            break;
        case EventKind::shipment_departure: handle_departure(ev); break;
        case EventKind::shipment_arrival: handle_arrival(ev); break;
        case EventKind::assembly_job_complete: handle_job_complete(ev); break;
        }
    }

    void handle_tick(const Event& ev)
    {
        const int day = ev.day;
        for (Store& s : stores_) {
            if (day > 0) {
                s.demand_window.push_back(s.demand_today);
                while (static_cast<int>(s.demand_window.size()) > cfg_.review_period_days) {
                    s.demand_window.pop_front();
                }
                s.demand_today = 0;
            }
            result_.snapshots.push_back(Snapshot{day, s.key, s.on_hand, s.position(), s.backlog_qty});
        }

        for (std::size_t r = 0; r < regions_.size(); ++r) {
            const demand::DemandSignal& sig = (*region_signals_[r])[static_cast<std::size_t>(day)].signal;
            inject_customer(sig.hospital_order_qty, "hospital:" + regions_[r], static_cast<int>(r), day);
            inject_customer(sig.home_order_qty, "home:" + regions_[r], static_cast<int>(r), day);
        }

        // An idle production line re-evaluates its queue daily so a job held up
        // only by the rate freeze of a previous job can start.
        for (Production& line : production_) {
            try_start_production(line, static_cast<double>(day));
        }
    }

    void inject_customer(long long qty, const std::string& origin, int region, int day)
    {
        if (qty <= 0) {
            return;
        }
        const int store_idx = region_distributor_store_[static_cast<std::size_t>(region)];
        const std::string& dest = stores_[static_cast<std::size_t>(store_idx)].key;
        const long long n = cfg_.split_unit_orders ? qty : 1;
        const long long each = cfg_.split_unit_orders ? 1 : qty;
        for (long long i = 0; i < n; ++i) {
            const std::uint64_t id = new_order(OrderClass::customer, origin, dest, each,
                                               static_cast<double>(day), -1);
            schedule(static_cast<double>(day), EventKind::customer_order_arrival, store_idx, id, each);
        }
    }

    void handle_review(const Event& ev)
    {
        for (std::size_t i = 0; i < stores_.size(); ++i) {
            Store& s = stores_[i];
            if (!s.has_policy || s.demand_window.empty()) {
                continue;
            }
            std::vector<double> window(s.demand_window.begin(), s.demand_window.end());
            s.inputs.mu_d = stats::mean(window);
            s.inputs.sigma_d = stats::stddev_pop(window);
            s.qr = qr_parameters(s.inputs);
            reorder_check(static_cast<int>(i), ev.t);
        }
    }

    void handle_departure(const Event& ev)
    {
        Order& o = order(ev.id);
        const Store& home = stores_[static_cast<std::size_t>(ev.store)];
        const net::FacilityNode& from = net_.node(net_.index_of(o.destination));
        const net::FacilityNode& to = net_.node(home.node);
        const net::Route route = net::route_between(from, to, cfg_.transit);

        // The transport strategy governs finished units bound for distributors;
        // upstream part and material legs may always fly long hauls.
        const TransportStrategy strategy =
            home.type == StoreType::distributor_oc ? cfg_.transport : TransportStrategy::air_over_500;
        o.mode = select_mode(route.distance_miles, strategy, cfg_.transit.air_cutoff_miles);
        const double transit =
            net::transit_days(route.distance_miles, o.mode, cfg_.transit) * transit_noise(ev.id);
        schedule(ev.t + transit, EventKind::shipment_arrival, ev.store, ev.id, ev.qty);
    }

    void handle_arrival(const Event& ev)
    {
        Store& s = stores_[static_cast<std::size_t>(ev.store)];
        s.on_hand += ev.qty;
        s.on_order -= ev.qty;
        s.flow_received += ev.qty;
        Order& o = order(ev.id);
        o.fulfilled_at = ev.t; // replenishment fulfillment is delivery
        drain_backlog(ev.store, ev.t);
        reorder_check(ev.store, ev.t);
    }

    void handle_job_complete(const Event& ev)
    {
        Store& s = stores_[static_cast<std::size_t>(ev.store)];
        s.on_hand += ev.qty;
        s.on_order -= ev.qty;
        s.flow_produced += ev.qty;
        const Job job = jobs_.at(ev.id);
        jobs_.erase(ev.id);
        drain_backlog(ev.store, ev.t);
        reorder_check(ev.store, ev.t);
        Production& line = production_[static_cast<std::size_t>(production_by_node_.at(job.facility))];
        try_start_production(line, ev.t);
    }

    // ---- audit & wrap-up ----------------------------------------------------

    void audit()
    {
        for (const Store& s : stores_) {
            ++result_.audit_checks;
            if (s.on_hand < 0 || s.on_order < 0 || s.backlog_qty < 0) {
                throw InvariantError("store " + s.key + ": negative inventory quantity");
            }
            if (s.position_tracked != s.position()) {
                throw InvariantError("store " + s.key + ": inventory position " + std::to_string(s.position()) +
                                     " != tracked " + std::to_string(s.position_tracked));
            }
        }
    }

    void finalize()
    {
        result_.orders = std::move(orders_);
        result_.flows.reserve(stores_.size());
        for (const Store& s : stores_) {
            result_.flows.push_back(StoreFlow{s.key, s.flow_initial, s.flow_received, s.flow_produced,
                                              s.flow_shipped, s.flow_consumed, s.on_hand});
        }
        for (const Production& p : production_) {
            UtilizationSeries u;
            u.facility = net_.node(p.facility).node_id;
            u.busy_fraction = p.busy_by_day;
            result_.utilization.push_back(std::move(u));
        }
    }
};

} // namespace

RunResult run(const net::Network& network, const EngineConfig& config, const PolicyPlan& plan,
              const std::vector<std::string>& regions, const std::vector<double>& region_weights,
              const std::unordered_map<std::string, std::vector<DailyRegionInput>>& signals_by_region,
              int horizon_days, std::uint64_t seed)
{
    if (horizon_days < 1) {
        throw ConfigError("des::run: horizon must be at least one day");
    }
    Engine engine(network, config, plan, regions, region_weights, signals_by_region, horizon_days, seed);
    return engine.execute();
}

} // namespace ocsim::des
