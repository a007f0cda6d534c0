#ifndef BELL3_IO_HPP
#define BELL3_IO_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bell3/bounds.hpp"
#include "bell3/correlation_tensor.hpp"
#include "bell3/lhv.hpp"

namespace bell3 {

inline nlohmann::json to_json(const CorrelationTensor& t) {
    return nlohmann::json{{"n_parties", t.n_parties},
                          {"components", t.components},
                          {"label", t.label}};
}

inline CorrelationTensor tensor_from_json(const nlohmann::json& j) {
    CorrelationTensor t;
    t.n_parties = j.at("n_parties").get<int>();
    t.components = j.at("components").get<std::vector<double>>();
    t.label = j.value("label", std::string{});
    if (t.n_parties < 2)
        throw std::invalid_argument("n_parties must be >= 2");
    if (t.components.size() != (std::size_t(1) << t.n_parties))
        throw std::invalid_argument("components length must be 2^n_parties");
    return t;
}

inline nlohmann::json to_json(const BoundsReport& r) {
    nlohmann::json j{{"n_parties", r.n_parties},
                     {"ee_value", r.ee_value},
                     {"ee_mode", r.ee_direct ? "direct" : "closed_form"},
                     {"t_max", r.t_max},
                     {"three_setting_bound", r.three_setting_bound},
                     {"sum_sq", r.sum_sq},
                     {"zb_two_setting_exists", r.zb_two_setting_exists},
                     {"three_setting_violated", r.three_setting_violated},
                     {"plane_infinite_threshold", r.plane_infinite_threshold},
                     {"verdict", r.verdict}};
    if (r.visibility)
        j["visibility"] = *r.visibility;
    if (r.lhv_oracle_max)
        j["lhv_oracle_max"] = *r.lhv_oracle_max;
    return j;
}

inline nlohmann::json to_json(const ViolationWindow& w) {
    return nlohmann::json{{"n_parties", w.n_parties},
                          {"lower", w.lower},
                          {"upper", w.upper},
                          {"nonempty", w.nonempty}};
}

inline nlohmann::json to_json(const LhvResult& r, double bound) {
    return nlohmann::json{
        {"max_value", r.max_value},
        {"argmax_signs", r.argmax.signs},
        {"bound", bound},
        {"satisfied", r.max_value <= bound + kViolationTol},
        {"mode", r.mode == LhvMode::Exhaustive ? "exhaustive" : "alternating"}};
}

inline std::string csv_header() {
    return "n,v,ee,t_max,bound,sum_sq,zb_exists,violated";
}

inline std::string csv_row(const BoundsReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << r.n_parties << ',';
    if (r.visibility)
        os << *r.visibility;
    os << ',' << r.ee_value << ',' << r.t_max << ',' << r.three_setting_bound
       << ',' << r.sum_sq << ',' << (r.zb_two_setting_exists ? 1 : 0) << ','
       << (r.three_setting_violated ? 1 : 0);
    return os.str();
}

inline CorrelationTensor load_tensor(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return tensor_from_json(j);
}

inline void save_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << '\n';
}

}  // namespace bell3

#endif
