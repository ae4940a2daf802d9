#include "twoscale/core/serialize.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace twoscale {

namespace {

constexpr char kMagic[4] = {'T', 'S', 'G', 'V'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("read_binary: truncated table");
    return v;
}

}  // namespace

json ext_to_json(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    if (v == -std::numeric_limits<double>::infinity()) return "-inf";
    if (std::isnan(v)) throw std::invalid_argument("ext_to_json: NaN is not an extended real");
    return v;
}

double ext_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("ext_from_json: unexpected string " + s);
    }
    return j.get<double>();
}

json to_json(const GridValueFn& f) {
    json values = json::array();
    for (double v : f.values()) values.push_back(ext_to_json(v));
    return json{{"axes", f.grid().axes()}, {"values", std::move(values)}, {"interp", to_string(f.mode())}};
}

GridValueFn grid_fn_from_json(const json& j) {
    Grid g(j.at("axes").get<std::vector<std::vector<double>>>());
    std::vector<double> v;
    v.reserve(j.at("values").size());
    for (const auto& x : j.at("values")) v.push_back(ext_from_json(x));
    return GridValueFn(std::move(g), std::move(v), interp_from_string(j.value("interp", "multilinear")));
}

json to_json(const DiscreteDist& d) {
    json atoms = json::array();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto a = d.atom(i);
        atoms.push_back(std::vector<double>(a.begin(), a.end()));
    }
    return json{{"atoms", std::move(atoms)}, {"probs", std::vector<double>(d.probs().begin(), d.probs().end())}};
}

DiscreteDist dist_from_json(const json& j) {
    const auto atoms = j.at("atoms").get<std::vector<std::vector<double>>>();
    auto probs = j.at("probs").get<std::vector<double>>();
    if (atoms.empty()) throw std::invalid_argument("dist_from_json: empty support");
    const std::size_t dim = atoms.front().size();
    std::vector<double> flat;
    for (const auto& a : atoms) {
        if (a.size() != dim) throw std::invalid_argument("dist_from_json: ragged atoms");
        flat.insert(flat.end(), a.begin(), a.end());
    }
    return DiscreteDist(dim, std::move(flat), std::move(probs));
}

void write_binary(std::ostream& os, const GridValueFn& f) {
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, f.mode() == Interp::nearest ? 0u : 1u);
    const Grid& g = f.grid();
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dims()));
    for (std::size_t d = 0; d < g.dims(); ++d) put<std::uint64_t>(os, g.extent(d));
    for (std::size_t d = 0; d < g.dims(); ++d)
        os.write(reinterpret_cast<const char*>(g.axis(d).data()),
                 static_cast<std::streamsize>(g.axis(d).size() * sizeof(double)));
    os.write(reinterpret_cast<const char*>(f.values().data()),
             static_cast<std::streamsize>(f.size() * sizeof(double)));
}

GridValueFn read_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != std::string(kMagic, 4)) throw std::runtime_error("read_binary: bad magic");
    if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("read_binary: unsupported version");
    const auto mode = get<std::uint32_t>(is) == 0u ? Interp::nearest : Interp::multilinear;
    const auto dims = get<std::uint32_t>(is);
    std::vector<std::uint64_t> extents(dims);
    for (auto& e : extents) e = get<std::uint64_t>(is);
    std::vector<std::vector<double>> axes(dims);
    std::size_t total = 1;
    for (std::size_t d = 0; d < dims; ++d) {
        axes[d].resize(extents[d]);
        is.read(reinterpret_cast<char*>(axes[d].data()), static_cast<std::streamsize>(extents[d] * sizeof(double)));
        total *= extents[d];
    }
    std::vector<double> values(total);
    is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(total * sizeof(double)));
    if (!is) throw std::runtime_error("read_binary: truncated table");
    return GridValueFn(Grid(std::move(axes)), std::move(values), mode);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << j.dump(1) << '\n';
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    return json::parse(is);
}

}  // namespace twoscale
