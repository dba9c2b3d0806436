#include "scatterlab/gf.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

namespace scatterlab::gf {

namespace {

struct Entry {
    std::uint64_t p;
    unsigned d;
    std::vector<std::uint32_t> coeffs;  // lowest degree first, monic
};

// Smallest monic irreducible of each degree, ordered by the base-p value of
// the non-leading coefficients. Fixed data so runs are bit-reproducible.
const Entry kTable[] = {
    {2, 1, {0, 1}},
    {2, 2, {1, 1, 1}},
    {2, 3, {1, 1, 0, 1}},
    {2, 4, {1, 1, 0, 0, 1}},
    {2, 5, {1, 0, 1, 0, 0, 1}},
    {2, 6, {1, 1, 0, 0, 0, 0, 1}},
    {2, 7, {1, 1, 0, 0, 0, 0, 0, 1}},
    {2, 8, {1, 1, 0, 1, 1, 0, 0, 0, 1}},
    {2, 9, {1, 1, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 10, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1}},
    {2, 11, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 12, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 13, {1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 14, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 15, {1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 16, {1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 17, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 18, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 19, {1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 20, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 21, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 22, {1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 23, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {2, 24, {1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {3, 1, {0, 1}},
    {3, 2, {1, 0, 1}},
    {3, 3, {1, 2, 0, 1}},
    {3, 4, {2, 1, 0, 0, 1}},
    {3, 5, {1, 2, 0, 0, 0, 1}},
    {3, 6, {2, 1, 0, 0, 0, 0, 1}},
    {3, 7, {2, 0, 1, 0, 0, 0, 0, 1}},
    {3, 8, {2, 0, 1, 0, 0, 0, 0, 0, 1}},
    {3, 9, {1, 0, 1, 2, 0, 0, 0, 0, 0, 1}},
    {3, 10, {1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 1}},
    {3, 11, {2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {3, 12, {2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {5, 1, {0, 1}},
    {5, 2, {2, 0, 1}},
    {5, 3, {1, 1, 0, 1}},
    {5, 4, {2, 0, 0, 0, 1}},
    {5, 5, {1, 4, 0, 0, 0, 1}},
    {5, 6, {2, 1, 0, 0, 0, 0, 1}},
    {5, 7, {1, 1, 0, 0, 0, 0, 0, 1}},
    {5, 8, {2, 0, 0, 0, 0, 0, 0, 0, 1}},
    {7, 1, {0, 1}},
    {7, 2, {1, 0, 1}},
    {7, 3, {2, 0, 0, 1}},
    {7, 4, {1, 1, 0, 0, 1}},
    {7, 5, {3, 1, 0, 0, 0, 1}},
    {7, 6, {2, 0, 0, 0, 0, 0, 1}},
    {11, 1, {0, 1}},
    {11, 2, {1, 0, 1}},
    {11, 3, {4, 1, 0, 1}},
    {11, 4, {2, 1, 0, 0, 1}},
    {13, 1, {0, 1}},
    {13, 2, {2, 0, 1}},
    {13, 3, {2, 0, 0, 1}},
    {13, 4, {2, 0, 0, 0, 1}},
};

std::map<std::pair<std::uint64_t, unsigned>, std::vector<std::uint32_t>> load_override() {
    std::map<std::pair<std::uint64_t, unsigned>, std::vector<std::uint32_t>> out;
    const char* path = std::getenv("SCATTERLAB_BUILTIN_MODULI");
    if (!path || !*path) return out;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("SCATTERLAB_BUILTIN_MODULI: cannot open file");
    nlohmann::json j;
    in >> j;
    for (auto& [pk, degs] : j.items()) {
        std::uint64_t p = std::stoull(pk);
        for (auto& [dk, coeffs] : degs.items()) {
            unsigned d = static_cast<unsigned>(std::stoul(dk));
            std::vector<std::uint32_t> c = coeffs.get<std::vector<std::uint32_t>>();
            if (!is_irreducible_mod_p(p, c))
                throw std::runtime_error("SCATTERLAB_BUILTIN_MODULI: reducible entry for p=" +
                                         pk + " d=" + dk);
            out[{p, d}] = std::move(c);
        }
    }
    return out;
}

}  // namespace

std::vector<std::uint32_t> builtin_modulus(std::uint64_t p, unsigned d) {
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, unsigned>, std::vector<std::uint32_t>> override_tbl;
    static bool loaded = false;
    {
        std::lock_guard<std::mutex> lk(mu);
        if (!loaded) {
            override_tbl = load_override();
            loaded = true;
        }
        auto it = override_tbl.find({p, d});
        if (it != override_tbl.end()) return it->second;
    }
    for (const auto& e : kTable) {
        if (e.p == p && e.d == d) return e.coeffs;
    }
    throw std::invalid_argument("builtin_modulus: no shipped modulus for p=" + std::to_string(p) +
                                ", degree=" + std::to_string(d));
}

}  // namespace scatterlab::gf
