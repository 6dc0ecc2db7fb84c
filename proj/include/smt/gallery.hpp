#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "circulant.hpp"
#include "config.hpp"
#include "error.hpp"
#include "operand.hpp"
#include "toeplitz.hpp"

namespace smt {

/// Request for a gallery matrix.  `cols == 0` means square.  Parameter keys
/// are per generator (see gallery_names()/gallery_parameters()); unknown keys
/// are rejected.
struct GallerySpec {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
    bool complex = false;
};

/// Seeded generator for the random gallery entries.
///
/// mt19937_64 seeded with the given value; uniform deviates are the top 53
/// bits scaled to [0, 1), normal deviates come from Box-Muller on two
/// uniforms (cosine branch only).  Output is bit-reproducible for a seed.
class GalleryRng {
public:
    explicit GalleryRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {

struct Generator {
    std::set<std::string> keys;
    std::function<Operand(const GallerySpec&, const Config&)> build;
};

inline double param(const GallerySpec& s, const std::string& key, double fallback) {
    auto it = s.params.find(key);
    return it == s.params.end() ? fallback : it->second;
}

inline std::size_t square_size(const GallerySpec& s) {
    if (s.cols != 0 && s.cols != s.rows)
        throw InvalidArgument("gallery '" + s.name + "' produces square matrices only");
    return s.rows;
}

inline long long int_param(const GallerySpec& s, const std::string& key, long long fallback) {
    const double v = param(s, key, static_cast<double>(fallback));
    if (v != std::floor(v)) throw InvalidArgument("gallery '" + s.name + "': parameter '" + key + "' must be an integer");
    return static_cast<long long>(v);
}

// Symmetric real Toeplitz from t_k, k >= 0.
template <class F>
Toeplitz symmetric(std::size_t n, const Config& cfg, F f) {
    Vector col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = f(static_cast<double>(k));
    return toeplitz(col, cfg);
}

// General square Toeplitz from t_d, d = 1-n .. n-1.
template <class F>
Toeplitz by_diagonal(std::size_t m, std::size_t n, const Config& cfg, F f) {
    Vector t(m + n - 1);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = f(static_cast<long long>(k) - static_cast<long long>(n) + 1);
    return Toeplitz(m, n, std::move(t), cfg);
}

inline cplx random_entry(GalleryRng& rng, bool normal, bool complex) {
    const double re = normal ? rng.normal() : rng.uniform();
    const double im = complex ? (normal ? rng.normal() : rng.uniform()) : 0.0;
    return {re, im};
}

inline const std::map<std::string, Generator>& generators() {
    static const std::map<std::string, Generator> table = [] {
        std::map<std::string, Generator> g;
        using S = const GallerySpec&;
        using C = const Config&;

        auto random_circ = [](bool normal) {
            return [normal](S s, C) -> Operand {
                const std::size_t n = square_size(s);
                GalleryRng rng(s.seed);
                Vector col(n);
                for (cplx& z : col) z = random_entry(rng, normal, s.complex);
                return Circulant(std::move(col));
            };
        };
        g["crrand"] = {{}, random_circ(false)};
        g["crrandn"] = {{}, random_circ(true)};

        auto random_toep = [](bool normal) {
            return [normal](S s, C cfg) -> Operand {
                const std::size_t m = s.rows, n = s.cols ? s.cols : s.rows;
                GalleryRng rng(s.seed);
                Vector t(m + n - 1);
                for (cplx& z : t) z = random_entry(rng, normal, s.complex);
                return Toeplitz(m, n, std::move(t), cfg);
            };
        };
        g["tprand"] = {{}, random_toep(false)};
        g["tprandn"] = {{}, random_toep(true)};

        g["algdec"] = {{"p"}, [](S s, C cfg) -> Operand {
                           const double p = param(s, "p", 2.0);
                           return symmetric(square_size(s), cfg, [p](double k) { return std::pow(1.0 + k, -p); });
                       }};
        g["expdec"] = {{"p"}, [](S s, C cfg) -> Operand {
                           const double p = param(s, "p", 0.5);
                           return symmetric(square_size(s), cfg, [p](double k) { return std::exp(-p * k); });
                       }};
        g["gaussian"] = {{"p"}, [](S s, C cfg) -> Operand {
                             const double p = param(s, "p", 0.1);
                             return symmetric(square_size(s), cfg, [p](double k) { return std::exp(-p * k * k); });
                         }};
        g["tkms"] = {{"rho"}, [](S s, C cfg) -> Operand {
                         const double rho = param(s, "rho", 0.5);
                         return symmetric(square_size(s), cfg, [rho](double k) { return std::pow(rho, k); });
                     }};
        g["tprolate"] = {{"w"}, [](S s, C cfg) -> Operand {
                             const double w = param(s, "w", 0.25);
                             return symmetric(square_size(s), cfg, [w](double k) {
                                 if (k == 0.0) return 2.0 * w;
                                 return std::sin(2.0 * std::numbers::pi * w * k) / (std::numbers::pi * k);
                             });
                         }};
        g["ttridiag"] = {{"c", "d", "e"}, [](S s, C cfg) -> Operand {
                             const double c = param(s, "c", -1.0), d = param(s, "d", 2.0), e = param(s, "e", -1.0);
                             const std::size_t n = square_size(s);
                             return by_diagonal(n, n, cfg, [=](long long k) {
                                 return k == 1 ? c : k == 0 ? d : k == -1 ? e : 0.0;
                             });
                         }};
        // diagonals -2..2 carry a, b, c, d, e
        g["ttoeppen"] = {{"a", "b", "c", "d", "e"}, [](S s, C cfg) -> Operand {
                             const double a = param(s, "a", 1.0), b = param(s, "b", -10.0), c = param(s, "c", 0.0),
                                          d = param(s, "d", 10.0), e = param(s, "e", 1.0);
                             const std::size_t n = square_size(s);
                             return by_diagonal(n, n, cfg, [=](long long k) {
                                 switch (k) {
                                 case -2: return a;
                                 case -1: return b;
                                 case 0: return c;
                                 case 1: return d;
                                 case 2: return e;
                                 default: return 0.0;
                                 }
                             });
                         }};
        g["ttoeppd"] = {{"m"}, [](S s, C cfg) -> Operand {
                            const std::size_t n = square_size(s);
                            const long long m = int_param(s, "m", static_cast<long long>(n));
                            if (m < 1) throw InvalidArgument("gallery 'ttoeppd': m must be positive");
                            GalleryRng rng(s.seed);
                            std::vector<double> w(static_cast<std::size_t>(m)), theta(w.size());
                            for (double& x : w) x = rng.uniform();
                            for (double& x : theta) x = rng.uniform();
                            return symmetric(n, cfg, [&](double k) {
                                double sum = 0.0;
                                for (std::size_t i = 0; i < w.size(); ++i)
                                    sum += w[i] * std::cos(2.0 * std::numbers::pi * theta[i] * k);
                                return sum;
                            });
                        }};
        g["tgrcar"] = {{"k"}, [](S s, C cfg) -> Operand {
                           const std::size_t n = square_size(s);
                           const long long k = int_param(s, "k", 3);
                           if (k < 0) throw InvalidArgument("gallery 'tgrcar': k must be non-negative");
                           return by_diagonal(n, n, cfg, [k](long long d) {
                               return d == 1 ? -1.0 : (d <= 0 && d >= -k) ? 1.0 : 0.0;
                           });
                       }};
        g["tparter"] = {{}, [](S s, C cfg) -> Operand {
                            const std::size_t n = square_size(s);
                            return by_diagonal(n, n, cfg, [](long long d) { return 1.0 / (static_cast<double>(d) + 0.5); });
                        }};
        g["tchow"] = {{"alpha", "delta"}, [](S s, C cfg) -> Operand {
                          const double alpha = param(s, "alpha", 1.0), delta = param(s, "delta", 0.0);
                          const std::size_t n = square_size(s);
                          return by_diagonal(n, n, cfg, [=](long long d) {
                              if (d < -1) return 0.0;
                              const double v = std::pow(alpha, static_cast<double>(d + 1));
                              return d == 0 ? v + delta : v;
                          });
                      }};
        g["ttriw"] = {{"alpha", "k"}, [](S s, C cfg) -> Operand {
                          const std::size_t n = square_size(s);
                          const double alpha = param(s, "alpha", -1.0);
                          const long long k = int_param(s, "k", static_cast<long long>(n) - 1);
                          if (k < 0) throw InvalidArgument("gallery 'ttriw': k must be non-negative");
                          return by_diagonal(n, n, cfg, [=](long long d) {
                              return d == 0 ? 1.0 : (d < 0 && d >= -k) ? alpha : 0.0;
                          });
                      }};
        // 0/1 patterns: 1 = period-4 column pattern 1,0,0,1 with row (1,1,0,1,0...),
        // 2 = upper triangular with row pattern 1,1,0,0 repeated, 3 = lower
        // Hessenberg with alternating column 1,0,1,0 (determinant F(n)).
        g["tdramadah"] = {{"k"}, [](S s, C cfg) -> Operand {
                              const std::size_t n = square_size(s);
                              const long long variant = int_param(s, "k", 1);
                              auto col_pattern = [](long long i) { return (i % 4 == 1 || i % 4 == 2) ? 0.0 : 1.0; };
                              switch (variant) {
                              case 1:
                                  return by_diagonal(n, n, cfg, [&](long long d) {
                                      if (d >= 0) return col_pattern(d);
                                      return (d == -1 || d == -3) ? 1.0 : 0.0;
                                  });
                              case 2:
                                  return by_diagonal(n, n, cfg, [](long long d) {
                                      if (d > 0) return 0.0;
                                      return ((-d) % 4 == 2 || (-d) % 4 == 3) ? 0.0 : 1.0;
                                  });
                              case 3:
                                  return by_diagonal(n, n, cfg, [&](long long d) {
                                      if (d >= 0) return d % 2 == 0 ? 1.0 : 0.0;
                                      return d == -1 ? 1.0 : 0.0;
                                  });
                              default: throw InvalidArgument("gallery 'tdramadah': k must be 1, 2 or 3");
                              }
                          }};
        // Band-limited kernel: a smooth quadrature of cos(theta k) over
        // |theta| <= width*pi with r = max(1, n/4) nodes.  The symbol vanishes
        // outside the band and the matrix has rank at most 2r.
        g["tphans"] = {{"width"}, [](S s, C cfg) -> Operand {
                           const std::size_t n = square_size(s);
                           const double width = param(s, "width", 0.25);
                           if (!(width > 0.0 && width <= 1.0))
                               throw InvalidArgument("gallery 'tphans': width must lie in (0, 1]");
                           const std::size_t r = std::max<std::size_t>(1, n / 4);
                           std::vector<double> node(r), weight(r);
                           for (std::size_t i = 0; i < r; ++i) {
                               const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(r);
                               node[i] = width * std::numbers::pi * u;
                               const double c = std::cos(0.5 * std::numbers::pi * u);
                               weight[i] = c * c / static_cast<double>(r);
                           }
                           return symmetric(n, cfg, [&](double k) {
                               double sum = 0.0;
                               for (std::size_t i = 0; i < r; ++i) sum += weight[i] * std::cos(node[i] * k);
                               return sum;
                           });
                       }};
        return g;
    }();
    return table;
}

} // namespace detail

inline std::vector<std::string> gallery_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : detail::generators()) names.push_back(k);
    return names;
}

inline std::set<std::string> gallery_parameters(const std::string& name) {
    auto it = detail::generators().find(name);
    if (it == detail::generators().end()) throw InvalidArgument("unknown gallery matrix '" + name + "'");
    return it->second.keys;
}

inline Operand smtgallery(const GallerySpec& spec, const Config& cfg = config_get()) {
    const auto& table = detail::generators();
    auto it = table.find(spec.name);
    if (it == table.end()) {
        std::string valid;
        for (const auto& [k, v] : table) valid += (valid.empty() ? "" : ", ") + k;
        throw InvalidArgument("unknown gallery matrix '" + spec.name + "' (valid: " + valid + ")");
    }
    if (spec.rows < 1) throw InvalidArgument("gallery '" + spec.name + "': size must be positive");
    for (const auto& [key, value] : spec.params) {
        if (!it->second.keys.contains(key))
            throw InvalidArgument("gallery '" + spec.name + "': unknown parameter '" + key + "'");
        if (!std::isfinite(value))
            throw InvalidArgument("gallery '" + spec.name + "': parameter '" + key + "' is not finite");
    }
    return it->second.build(spec, cfg);
}

inline Operand smtgallery(const std::string& name, std::size_t n, std::map<std::string, double> params = {},
                          const Config& cfg = config_get()) {
    GallerySpec spec;
    spec.name = name;
    spec.rows = n;
    spec.params = std::move(params);
    return smtgallery(spec, cfg);
}

} // namespace smt
