#include "tessforest/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tessforest {

namespace {

Json vec_to_json(const Vec& v) { return Json(v); }

Vec vec_from_json(const Json& j) { return j.get<Vec>(); }

void require_version(const Json& j) {
    if (!j.contains("format_version") || j.at("format_version").get<std::string>() != kFormatVersion)
        throw std::invalid_argument("unsupported format_version");
}

} // namespace

Json window_to_json(const Window& w) {
    if (w.is_box())
        return Json{{"kind", "box"}, {"lower", vec_to_json(w.box().lower)}, {"upper", vec_to_json(w.box().upper)}};
    return Json{{"kind", "ball"}, {"center", vec_to_json(w.ball().center)}, {"radius", w.ball().radius}};
}

Window window_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "box") return make_box_window(vec_from_json(j.at("lower")), vec_from_json(j.at("upper")));
    if (kind == "ball") return make_ball_window(vec_from_json(j.at("center")), j.at("radius").get<double>());
    throw std::invalid_argument("window: unknown kind '" + kind + "'");
}

Json phi_to_json(const DirectionalDistribution& phi) {
    if (!phi.is_discrete()) return Json{{"kind", "isotropic"}, {"d", phi.dim()}};
    Json atoms = Json::array();
    for (const auto& a : phi.discrete_atoms().atoms) atoms.push_back(vec_to_json(a));
    return Json{{"kind", "discrete"}, {"atoms", atoms}, {"weights", phi.discrete_atoms().weights}};
}

DirectionalDistribution phi_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "axis") return DirectionalDistribution::axis(j.at("d").get<int>());
    if (kind == "isotropic") return DirectionalDistribution::isotropic(j.at("d").get<int>());
    if (kind == "discrete") {
        std::vector<Vec> atoms;
        for (const auto& a : j.at("atoms")) atoms.push_back(vec_from_json(a));
        return DirectionalDistribution::discrete(std::move(atoms),
                                                 j.at("weights").get<std::vector<double>>());
    }
    throw std::invalid_argument("phi: unknown kind '" + kind + "'");
}

namespace {

Json hyperplane_to_json(const Hyperplane& h) {
    return Json{{"dir", vec_to_json(h.direction)}, {"t", h.offset}};
}

Hyperplane hyperplane_from_json(const Json& j) {
    return Hyperplane{vec_from_json(j.at("dir")), j.at("t").get<double>()};
}

} // namespace

Json partition_to_json(const Partition& p) {
    Json j{{"format_version", kFormatVersion},
           {"window", window_to_json(p.window())},
           {"phi", phi_to_json(p.phi())},
           {"lambda", p.lambda()}};
    if (p.kind() == Partition::Kind::Stit) {
        j["kind"] = "stit";
        Json nodes = Json::array();
        for (const auto& n : p.stit().nodes()) {
            if (n.below < 0) {
                nodes.push_back(Json{{"leaf", true}});
            } else {
                nodes.push_back(Json{{"below", n.below},
                                     {"above", n.above},
                                     {"cut", hyperplane_to_json(n.cut)},
                                     {"time", n.cut_time}});
            }
        }
        j["nodes"] = std::move(nodes);
    } else {
        j["kind"] = "pht";
        Json hps = Json::array();
        for (const auto& h : p.pht().hyperplanes()) hps.push_back(hyperplane_to_json(h));
        j["hyperplanes"] = std::move(hps);
    }
    return j;
}

Partition partition_from_json(const Json& j) {
    require_version(j);
    Window w = window_from_json(j.at("window"));
    DirectionalDistribution phi = phi_from_json(j.at("phi"));
    double lambda = j.at("lambda").get<double>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "stit") {
        std::vector<StitNode> nodes;
        for (const auto& nj : j.at("nodes")) {
            StitNode n;
            if (!nj.contains("leaf")) {
                n.below = nj.at("below").get<int>();
                n.above = nj.at("above").get<int>();
                n.cut = hyperplane_from_json(nj.at("cut"));
                n.cut_time = nj.at("time").get<double>();
            }
            nodes.push_back(std::move(n));
        }
        return Partition(rebuild_stit(w, phi, lambda, nodes));
    }
    if (kind == "pht") {
        std::vector<Hyperplane> hps;
        for (const auto& hj : j.at("hyperplanes")) hps.push_back(hyperplane_from_json(hj));
        return Partition(PhtPartition(w, phi, lambda, std::move(hps)));
    }
    throw std::invalid_argument("partition: unknown kind '" + kind + "'");
}

Json forest_to_json(const ForestModel& m) {
    Json trees = Json::array();
    for (const auto& t : m.trees()) {
        Json agg = Json::array();
        for (const auto& [key, a] : t.aggregates()) {
            agg.push_back(Json{{"key", key.words}, {"count", a.count}, {"sum", a.sum_y}});
        }
        trees.push_back(Json{{"partition", partition_to_json(t.partition())}, {"aggregates", agg}});
    }
    return Json{{"format_version", kFormatVersion}, {"trees", trees}};
}

ForestModel forest_from_json(const Json& j) {
    require_version(j);
    std::vector<TreeModel> trees;
    for (const auto& tj : j.at("trees")) {
        auto part = std::make_shared<Partition>(partition_from_json(tj.at("partition")));
        AggregateMap agg;
        for (const auto& aj : tj.at("aggregates")) {
            CellKey key{aj.at("key").get<std::vector<std::uint64_t>>()};
            agg[key] = CellAggregate{aj.at("count").get<std::uint64_t>(), aj.at("sum").get<double>()};
        }
        trees.emplace_back(std::move(part), std::move(agg));
    }
    if (trees.empty()) throw std::invalid_argument("forest: no trees");
    return ForestModel(std::move(trees));
}

std::string dataset_to_csv(const Dataset& d) {
    std::ostringstream out;
    for (int i = 1; i <= d.dim; ++i) out << "x" << i << ",";
    out << "y\n";
    out.precision(17);
    for (std::size_t r = 0; r < d.size(); ++r) {
        for (int i = 0; i < d.dim; ++i) out << d.xs[r][static_cast<std::size_t>(i)] << ",";
        out << d.ys[r] << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void check_x_header(const std::vector<std::string>& cols, int dim) {
    for (int i = 0; i < dim; ++i) {
        if (cols[static_cast<std::size_t>(i)] != "x" + std::to_string(i + 1))
            throw std::invalid_argument("csv: expected column x" + std::to_string(i + 1) +
                                        ", got '" + cols[static_cast<std::size_t>(i)] + "'");
    }
}

} // namespace

Dataset dataset_from_csv(const std::string& text, const Window& window) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "y")
        throw std::invalid_argument("csv: expected header x1..xd,y");
    int dim = static_cast<int>(header.size()) - 1;
    check_x_header(header, dim);
    if (dim != window.dim()) throw std::invalid_argument("csv: dimension does not match window");
    Dataset d;
    d.dim = dim;
    d.window = window;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cols = split_csv_line(line);
        if (cols.size() != header.size())
            throw std::invalid_argument("csv row " + std::to_string(row) + ": wrong column count");
        Vec x(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = std::stod(cols[static_cast<std::size_t>(i)]);
        d.xs.push_back(std::move(x));
        d.ys.push_back(std::stod(cols.back()));
        ++row;
    }
    validate_dataset(d);
    return d;
}

std::vector<Vec> points_from_csv(const std::string& text, int dim) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
    auto header = split_csv_line(line);
    if (static_cast<int>(header.size()) < dim)
        throw std::invalid_argument("csv: expected header x1..xd");
    check_x_header(header, dim);
    std::vector<Vec> pts;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cols = split_csv_line(line);
        if (cols.size() < static_cast<std::size_t>(dim))
            throw std::invalid_argument("csv row " + std::to_string(row) + ": wrong column count");
        Vec x(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = std::stod(cols[static_cast<std::size_t>(i)]);
        pts.push_back(std::move(x));
        ++row;
    }
    return pts;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

} // namespace tessforest
