#include "sdsplit/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace sdsplit {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

// Line-oriented reader that keeps track of the current line number for
// error reporting.
class LineReader {
public:
    explicit LineReader(const std::string& text) : stream_(text) {}

    bool next(std::string& out) {
        while (std::getline(stream_, raw_)) {
            ++line_;
            out = trim(raw_);
            if (!out.empty()) return true;
        }
        return false;
    }

    int line() const { return line_; }

private:
    std::istringstream stream_;
    std::string raw_;
    int line_ = 0;
};

// Portable bounded uniform draw (rejection sampling), so that a given seed
// produces the same stream on every platform.
std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
}

}  // namespace

double VrpInstance::edge_cost(int i, int j) const {
    const double d = travel_time(i, j);
    if (rounding == CostRounding::nearest_int) return std::floor(d + 0.5);
    return d;
}

double VrpInstance::travel_time(int i, int j) const {
    const Node& a = nodes[static_cast<std::size_t>(i)];
    const Node& b = nodes[static_cast<std::size_t>(j)];
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

void VrpInstance::check() const {
    if (nodes.empty()) throw std::invalid_argument("instance has no depot");
    if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
    if (nodes[0].demand != 0) throw std::invalid_argument("depot demand must be 0");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (nodes[i].demand < 1)
            throw std::invalid_argument("customer " + std::to_string(i) + " has demand < 1");
    }
    if (has_time_windows) {
        for (const Node& node : nodes) {
            if (!node.window) throw std::invalid_argument("missing time window");
            if (node.window->ready > node.window->due)
                throw std::invalid_argument("time window with ready > due");
            if (node.service_time < 0) throw std::invalid_argument("negative service time");
        }
    }
}

int k_min(const VrpInstance& instance) {
    std::int64_t total = 0;
    for (std::size_t i = 1; i < instance.nodes.size(); ++i) total += instance.nodes[i].demand;
    if (total == 0) return 0;
    return static_cast<int>(ceil_div(total, instance.capacity));
}

std::int64_t Route::load() const {
    std::int64_t sum = 0;
    for (const Visit& v : visits) sum += v.quantity;
    return sum;
}

VrpInstance parse_tsplib(const std::string& text) {
    VrpInstance inst;
    LineReader reader(text);
    std::string line;
    int dimension = -1;
    int vehicles = -1;
    bool saw_coords = false, saw_demands = false, saw_depot = false;
    bool is_tw_type = false;
    std::vector<bool> has_coord, has_demand;

    auto header_value = [](const std::string& l) {
        std::size_t colon = l.find(':');
        return colon == std::string::npos ? std::string() : trim(l.substr(colon + 1));
    };
    auto to_int = [&reader](const std::string& v) -> std::int64_t {
        try {
            std::size_t used = 0;
            std::int64_t parsed = std::stoll(v, &used);
            if (used != v.size()) fail(reader.line(), "bad integer " + v);
            return parsed;
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            fail(reader.line(), "bad integer " + v);
        }
    };
    auto keyword_of = [](const std::string& l) {
        std::size_t colon = l.find(':');
        return trim(colon == std::string::npos ? l : l.substr(0, colon));
    };

    while (reader.next(line)) {
        const std::string key = keyword_of(line);
        if (key == "NAME") {
            inst.name = header_value(line);
        } else if (key == "COMMENT" || key == "NODE_COORD_TYPE" || key == "DISPLAY_DATA_TYPE") {
            // ignored
        } else if (key == "TYPE") {
            const std::string type = header_value(line);
            if (type == "CVRPTW" || type == "VRPTW") {
                is_tw_type = true;
            } else if (type != "CVRP" && type != "DCVRP") {
                fail(reader.line(), "unsupported TYPE " + type);
            }
        } else if (key == "DIMENSION") {
            dimension = static_cast<int>(to_int(header_value(line)));
            if (dimension < 1) fail(reader.line(), "DIMENSION must be >= 1");
            inst.nodes.assign(static_cast<std::size_t>(dimension), Node{});
            for (int i = 0; i < dimension; ++i) inst.nodes[static_cast<std::size_t>(i)].id = i;
            has_coord.assign(static_cast<std::size_t>(dimension), false);
            has_demand.assign(static_cast<std::size_t>(dimension), false);
        } else if (key == "CAPACITY") {
            inst.capacity = to_int(header_value(line));
        } else if (key == "VEHICLES") {
            vehicles = static_cast<int>(to_int(header_value(line)));
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (header_value(line) != "EUC_2D")
                fail(reader.line(), "only EDGE_WEIGHT_TYPE EUC_2D is supported");
        } else if (key == "NODE_COORD_SECTION") {
            if (dimension < 0) fail(reader.line(), "NODE_COORD_SECTION before DIMENSION");
            for (int i = 0; i < dimension; ++i) {
                if (!reader.next(line)) fail(reader.line(), "truncated NODE_COORD_SECTION");
                std::istringstream row(line);
                int id;
                double x, y;
                if (!(row >> id >> x >> y)) fail(reader.line(), "malformed NODE_COORD_SECTION row");
                if (id < 1 || id > dimension)
                    fail(reader.line(), "node id out of range in NODE_COORD_SECTION");
                inst.nodes[static_cast<std::size_t>(id - 1)].x = x;
                inst.nodes[static_cast<std::size_t>(id - 1)].y = y;
                has_coord[static_cast<std::size_t>(id - 1)] = true;
            }
            saw_coords = true;
        } else if (key == "DEMAND_SECTION") {
            if (dimension < 0) fail(reader.line(), "DEMAND_SECTION before DIMENSION");
            for (int i = 0; i < dimension; ++i) {
                if (!reader.next(line)) fail(reader.line(), "truncated DEMAND_SECTION");
                std::istringstream row(line);
                int id;
                std::int64_t demand;
                if (!(row >> id >> demand)) fail(reader.line(), "malformed DEMAND_SECTION row");
                if (id < 1 || id > dimension)
                    fail(reader.line(), "node id out of range in DEMAND_SECTION");
                if (demand < 0) fail(reader.line(), "negative demand");
                inst.nodes[static_cast<std::size_t>(id - 1)].demand = demand;
                has_demand[static_cast<std::size_t>(id - 1)] = true;
            }
            saw_demands = true;
        } else if (key == "SERVICE_TIME_SECTION") {
            if (dimension < 0) fail(reader.line(), "SERVICE_TIME_SECTION before DIMENSION");
            for (int i = 0; i < dimension; ++i) {
                if (!reader.next(line)) fail(reader.line(), "truncated SERVICE_TIME_SECTION");
                std::istringstream row(line);
                int id;
                double st;
                if (!(row >> id >> st)) fail(reader.line(), "malformed SERVICE_TIME_SECTION row");
                if (id < 1 || id > dimension) fail(reader.line(), "node id out of range");
                inst.nodes[static_cast<std::size_t>(id - 1)].service_time = st;
            }
        } else if (key == "TIME_WINDOW_SECTION") {
            if (dimension < 0) fail(reader.line(), "TIME_WINDOW_SECTION before DIMENSION");
            for (int i = 0; i < dimension; ++i) {
                if (!reader.next(line)) fail(reader.line(), "truncated TIME_WINDOW_SECTION");
                std::istringstream row(line);
                int id;
                double a, b;
                if (!(row >> id >> a >> b)) fail(reader.line(), "malformed TIME_WINDOW_SECTION row");
                if (id < 1 || id > dimension) fail(reader.line(), "node id out of range");
                inst.nodes[static_cast<std::size_t>(id - 1)].window = TimeWindow{a, b};
            }
            inst.has_time_windows = true;
        } else if (key == "DEPOT_SECTION") {
            if (!reader.next(line)) fail(reader.line(), "truncated DEPOT_SECTION");
            if (to_int(line) != 1)
                fail(reader.line(), "the depot must be node 1");
            if (!reader.next(line) || trim(line) != "-1")
                fail(reader.line(), "DEPOT_SECTION must end with -1");
            saw_depot = true;
        } else if (key == "EOF") {
            break;
        } else {
            fail(reader.line(), "unknown keyword " + key);
        }
    }

    if (dimension < 0) throw ParseError("missing DIMENSION header");
    if (inst.capacity < 1) throw ParseError("missing or invalid CAPACITY header");
    if (!saw_coords) throw ParseError("missing NODE_COORD_SECTION");
    if (!saw_demands) throw ParseError("missing DEMAND_SECTION");
    if (!saw_depot) throw ParseError("missing DEPOT_SECTION");
    for (int i = 0; i < dimension; ++i) {
        if (!has_coord[static_cast<std::size_t>(i)])
            throw ParseError("node " + std::to_string(i + 1) + " missing coordinates");
        if (!has_demand[static_cast<std::size_t>(i)])
            throw ParseError("node " + std::to_string(i + 1) + " missing demand");
    }
    if (is_tw_type && !inst.has_time_windows)
        throw ParseError("CVRPTW instance without TIME_WINDOW_SECTION");

    inst.rounding = inst.has_time_windows ? CostRounding::exact : CostRounding::nearest_int;
    inst.fleet_size = vehicles > 0 ? vehicles : k_min(inst);
    inst.check();
    return inst;
}

VrpInstance parse_solomon(const std::string& text, int max_customers,
                          std::int64_t capacity_override) {
    VrpInstance inst;
    LineReader reader(text);
    std::string line;

    if (!reader.next(line)) throw ParseError("empty Solomon file");
    inst.name = line;

    // VEHICLE block: the "NUMBER CAPACITY" label row, then the values.
    bool saw_capacity = false;
    while (reader.next(line)) {
        if (line == "VEHICLE") {
            if (!reader.next(line)) fail(reader.line(), "truncated VEHICLE block");
            if (!reader.next(line)) fail(reader.line(), "truncated VEHICLE block");
            std::istringstream row(line);
            long long count, cap;
            if (!(row >> count >> cap)) fail(reader.line(), "malformed VEHICLE row");
            inst.capacity = cap;
            saw_capacity = true;
        } else if (line == "CUSTOMER") {
            // skip the column label rows (may span one or two lines)
            break;
        }
    }
    if (!saw_capacity) throw ParseError("missing VEHICLE block");
    if (capacity_override > 0) inst.capacity = capacity_override;

    while (reader.next(line)) {
        std::istringstream row(line);
        double id, x, y, demand, ready, due, service;
        if (!(row >> id >> x >> y >> demand >> ready >> due >> service)) {
            if (line.find("CUST") != std::string::npos) continue;  // label row
            fail(reader.line(), "malformed customer row");
        }
        double extra;
        if (row >> extra) fail(reader.line(), "too many fields in customer row");
        for (double v : {id, demand}) {
            if (v != std::floor(v)) fail(reader.line(), "non-integer field in customer row");
        }
        if (demand < 0) fail(reader.line(), "negative demand");
        Node node;
        node.id = static_cast<int>(inst.nodes.size());
        node.x = x;
        node.y = y;
        node.demand = static_cast<std::int64_t>(demand);
        node.window = TimeWindow{ready, due};
        node.service_time = service;
        inst.nodes.push_back(node);
        if (max_customers > 0 && static_cast<int>(inst.nodes.size()) > max_customers) break;
    }
    if (inst.nodes.size() < 2) throw ParseError("Solomon file has no customers");

    inst.has_time_windows = true;
    inst.rounding = CostRounding::exact;
    inst.fleet_size = k_min(inst);
    inst.check();
    return inst;
}

std::string write_tsplib(const VrpInstance& instance) {
    std::ostringstream out;
    const int dimension = static_cast<int>(instance.nodes.size());
    out << "NAME : " << instance.name << "\n";
    out << "TYPE : " << (instance.has_time_windows ? "CVRPTW" : "CVRP") << "\n";
    out << "DIMENSION : " << dimension << "\n";
    out << "CAPACITY : " << instance.capacity << "\n";
    out << "VEHICLES : " << instance.fleet_size << "\n";
    out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
    out << "NODE_COORD_SECTION\n";
    for (int i = 0; i < dimension; ++i) {
        const Node& n = instance.nodes[static_cast<std::size_t>(i)];
        out << (i + 1) << " " << format_number(n.x) << " " << format_number(n.y) << "\n";
    }
    out << "DEMAND_SECTION\n";
    for (int i = 0; i < dimension; ++i)
        out << (i + 1) << " " << instance.nodes[static_cast<std::size_t>(i)].demand << "\n";
    if (instance.has_time_windows) {
        out << "SERVICE_TIME_SECTION\n";
        for (int i = 0; i < dimension; ++i)
            out << (i + 1) << " "
                << format_number(instance.nodes[static_cast<std::size_t>(i)].service_time) << "\n";
        out << "TIME_WINDOW_SECTION\n";
        for (int i = 0; i < dimension; ++i) {
            const Node& n = instance.nodes[static_cast<std::size_t>(i)];
            out << (i + 1) << " " << format_number(n.window ? n.window->ready : 0) << " "
                << format_number(n.window ? n.window->due : 0) << "\n";
        }
    }
    out << "DEPOT_SECTION\n1\n-1\nEOF\n";
    return out.str();
}

DemandRange demand_range_from_string(const std::string& text) {
    if (text == "D1") return DemandRange::D1;
    if (text == "D2") return DemandRange::D2;
    if (text == "D3") return DemandRange::D3;
    if (text == "D4") return DemandRange::D4;
    if (text == "D5") return DemandRange::D5;
    if (text == "D6") return DemandRange::D6;
    throw std::invalid_argument("unknown demand range " + text + " (expected D1..D6)");
}

VrpInstance generate_random(const VrpInstance& base, DemandRange range, std::uint64_t seed,
                            std::int64_t capacity) {
    // Range bounds as hundredths of capacity; endpoints are ceilings.
    struct Bounds {
        int lo, hi;
    };
    Bounds percent{};
    switch (range) {
        case DemandRange::D1: percent = {1, 10}; break;
        case DemandRange::D2: percent = {10, 30}; break;
        case DemandRange::D3: percent = {10, 50}; break;
        case DemandRange::D4: percent = {10, 90}; break;
        case DemandRange::D5: percent = {30, 70}; break;
        case DemandRange::D6: percent = {70, 90}; break;
    }
    const std::int64_t lo = ceil_div(percent.lo * capacity, 100);
    const std::int64_t hi = ceil_div(percent.hi * capacity, 100);

    VrpInstance inst = base;
    inst.capacity = capacity;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 1; i < inst.nodes.size(); ++i)
        inst.nodes[i].demand = uniform_int(rng, lo, hi);
    inst.fleet_size = k_min(inst);
    inst.check();
    return inst;
}

}  // namespace sdsplit
