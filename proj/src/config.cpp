#include "detquas/config.hpp"

#include <fstream>
#include <set>

namespace detquas::config {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

double number_at(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) fail(std::string("expected number '") + key + "'");
    return j[key].get<double>();
}

long integer_at(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        fail(std::string("expected integer '") + key + "'");
    return j[key].get<long>();
}

std::string string_at(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) fail(std::string("expected string '") + key + "'");
    return j[key].get<std::string>();
}

HalfLineSide side_from(const json& params) {
    std::string s = string_at(params, "sign");
    if (s == "plus" || s == "+") return HalfLineSide::Plus;
    if (s == "minus" || s == "-") return HalfLineSide::Minus;
    fail("sign must be 'plus' or 'minus'");
}

}  // namespace

void require_keys(const json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
    if (!j.is_object()) fail("expected an object");
    std::set<std::string> allowed;
    for (const char* k : required) {
        if (!j.contains(k)) fail(std::string("missing key '") + k + "'");
        allowed.insert(k);
    }
    for (const char* k : optional) allowed.insert(k);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail("unknown key '" + it.key() + "'");
}

WindowPtr parse_window(const json& j) {
    require_keys(j, {"model", "lo", "hi"});
    std::string model = string_at(j, "model");
    long lo = integer_at(j, "lo"), hi = integer_at(j, "hi");
    AmbientModel m;
    if (model == "half_line") m = AmbientModel::HalfLine;
    else if (model == "full_line") m = AmbientModel::FullLine;
    else if (model == "finite") m = AmbientModel::Finite;
    else fail("model must be one of half_line, full_line, finite");
    try {
        return GroundWindow::integer_interval(m, lo, hi);
    } catch (const std::invalid_argument& e) {
        fail(std::string("window: ") + e.what());
    }
}

WeightFunction parse_weight(const json& j, const WindowPtr& window) {
    if (!j.is_object() || !j.contains("family")) fail("weight: missing 'family'");
    std::string family = string_at(j, "family");
    try {
        if (family == "uniform") {
            require_keys(j, {"family"});
            return uniform_weight(window);
        }
        if (family == "charlier") {
            require_keys(j, {"family", "theta"});
            return charlier_weight(window, number_at(j, "theta"));
        }
        if (family == "meixner") {
            require_keys(j, {"family", "beta", "c"});
            return meixner_weight(window, number_at(j, "beta"), number_at(j, "c"));
        }
        if (family == "krawtchouk") {
            require_keys(j, {"family", "M", "p"});
            return krawtchouk_weight(window, integer_at(j, "M"), number_at(j, "p"));
        }
        if (family == "table") {
            require_keys(j, {"family", "values"});
            if (!j["values"].is_array()) fail("table weight: 'values' must be an array");
            std::vector<double> values;
            for (const auto& v : j["values"]) {
                if (!v.is_number()) fail("table weight: values must be numbers");
                values.push_back(v.get<double>());
            }
            return WeightFunction(window, std::move(values));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(std::string("weight: ") + e.what());
    }
    fail("unknown weight family '" + family + "'");
}

bool is_closed_form_family(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) return false;
    std::string f = j["family"].get<std::string>();
    return f == "sine" || f == "discrete_hermite" || f == "discrete_laguerre" ||
           f == "discrete_jacobi_symmetric";
}

KernelFunctionPtr parse_kernel_function(const json& j) {
    require_keys(j, {"family", "params"});
    std::string family = string_at(j, "family");
    const json& params = j["params"];
    try {
        if (family == "sine") {
            require_keys(params, {"phi"});
            return sine_kernel(number_at(params, "phi"));
        }
        if (family == "discrete_hermite") {
            require_keys(params, {"sign", "r"});
            return discrete_hermite(side_from(params), number_at(params, "r"));
        }
        if (family == "discrete_laguerre") {
            require_keys(params, {"alpha", "r", "sign"});
            return discrete_laguerre(number_at(params, "alpha"), number_at(params, "r"),
                                     side_from(params));
        }
        if (family == "discrete_jacobi_symmetric") {
            require_keys(params, {"a", "sign"});
            return discrete_jacobi_symmetric(number_at(params, "a"), side_from(params));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(std::string("kernel: ") + e.what());
    }
    fail("kernel family '" + family + "' is not a closed-form lattice kernel");
}

KernelMatrix parse_kernel_matrix(const json& j, const json* window) {
    if (is_closed_form_family(j)) {
        if (window == nullptr)
            fail("materializing a closed-form kernel needs a window config");
        WindowPtr win = parse_window(*window);
        auto kf = parse_kernel_function(j);
        try {
            return materialize(*kf, win);
        } catch (const std::exception& e) {
            fail(std::string("materialize: ") + e.what());
        }
    }
    require_keys(j, {"family", "params"});
    std::string family = string_at(j, "family");
    const json& params = j["params"];
    try {
        if (family == "cd_finite") {
            require_keys(params, {"window", "weight", "N"});
            WindowPtr win = parse_window(params["window"]);
            WeightFunction w = parse_weight(params["weight"], win);
            long N = integer_at(params, "N");
            if (N < 0) fail("cd_finite: N must be nonnegative");
            std::size_t n_max = std::max<long>(N, 1);
            if (n_max + 1 > win->size()) fail("cd_finite: N too large for the window");
            OPSystem ops(std::move(w), n_max);
            return cd_kernel(ops, static_cast<std::size_t>(N));
        }
        if (family == "custom") {
            require_keys(params, {"window", "entries"});
            WindowPtr win = parse_window(params["window"]);
            if (!params["entries"].is_array()) fail("custom kernel: entries must be a matrix");
            const auto& rows = params["entries"];
            Eigen::MatrixXd K(win->size(), win->size());
            if (rows.size() != win->size()) fail("custom kernel: row count mismatch");
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (!rows[r].is_array() || rows[r].size() != win->size())
                    fail("custom kernel: column count mismatch");
                for (std::size_t c = 0; c < rows[r].size(); ++c) {
                    if (!rows[r][c].is_number()) fail("custom kernel: entries must be numbers");
                    K(r, c) = rows[r][c].get<double>();
                }
            }
            return KernelMatrix(win, std::move(K));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(std::string("kernel: ") + e.what());
    }
    fail("unknown kernel family '" + family + "'");
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

std::string config_hash_hex(const json& j) {
    std::string dump = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace detquas::config
