#include "dirac/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dirac {

namespace {

int nearest_index(const BoundaryParams& bp, double lambda) {
    return static_cast<int>(std::lround(lambda - bp.offset()));
}

struct WeightedPole {
    double a = 0.0;  // free eigenvalue
    double w = 0.0;  // |v_k|^2
};

double secular(double mu, const std::vector<WeightedPole>& poles, double x) {
    double s = 1.0;
    for (const auto& p : poles) s += mu * p.w / (p.a - x);
    return s;
}

double secular_prime(double mu, const std::vector<WeightedPole>& poles, double x) {
    double s = 0.0;
    for (const auto& p : poles) {
        const double d = p.a - x;
        s += mu * p.w / (d * d);
    }
    return s;
}

// One zero of the secular function inside (lo, hi); lo and hi are poles or
// quasi-infinite endpoints. want_neg_at_lo says whether the function tends to
// -inf at lo+ (mu > 0) or +inf (mu < 0).
double solve_monotone(double mu, const std::vector<WeightedPole>& poles, double lo, double hi,
                      bool lo_is_pole, bool hi_is_pole, double w_lo, double w_hi) {
    const double span = hi - lo;
    auto f = [&](double x) { return secular(mu, poles, x); };
    const double sign_lo = mu > 0.0 ? -1.0 : 1.0;

    double xlo = lo, xhi = hi;
    if (lo_is_pole) {
        double d = span * 1e-3;
        while (d > 1e-15 * (1.0 + std::abs(lo)) && f(lo + d) * sign_lo <= 0.0) d *= 0.1;
        if (f(lo + d) * sign_lo <= 0.0) return lo + mu * w_lo;  // perturbative fallback
        xlo = lo + d;
    }
    if (hi_is_pole) {
        double d = span * 1e-3;
        while (d > 1e-15 * (1.0 + std::abs(hi)) && f(hi - d) * sign_lo >= 0.0) d *= 0.1;
        if (f(hi - d) * sign_lo >= 0.0) return hi + mu * w_hi;
        xhi = hi - d;
    }
    double flo = f(xlo);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (xlo + xhi);
        if (xhi - xlo < 1e-10 * (1.0 + std::abs(mid))) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            xlo = mid;
            flo = fm;
        } else {
            xhi = mid;
        }
    }
    double x = 0.5 * (xlo + xhi);
    for (int it = 0; it < 5; ++it) {
        const double d = secular_prime(mu, poles, x);
        if (d == 0.0) break;
        const double step = f(x) / d;
        const double nx = x - step;
        if (nx <= lo || nx >= hi) break;
        x = nx;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

std::vector<double> secular_zeros(double mu, const std::vector<WeightedPole>& poles) {
    std::vector<double> zeros;
    if (poles.empty() || mu == 0.0) return zeros;
    double total = 0.0;
    for (const auto& p : poles) total += p.w;
    const std::size_t n = poles.size();
    for (std::size_t j = 0; j + 1 < n; ++j)
        zeros.push_back(solve_monotone(mu, poles, poles[j].a, poles[j + 1].a, true, true,
                                       poles[j].w, poles[j + 1].w));
    const double reach = std::abs(mu) * total;
    if (mu > 0.0) {
        const double hi = poles[n - 1].a + reach + 1e-9 * (1.0 + reach);
        zeros.push_back(solve_monotone(mu, poles, poles[n - 1].a, hi, true, false,
                                       poles[n - 1].w, 0.0));
    } else {
        const double lo = poles[0].a - reach - 1e-9 * (1.0 + reach);
        zeros.insert(zeros.begin(),
                     solve_monotone(mu, poles, lo, poles[0].a, false, true, 0.0, poles[0].w));
    }
    return zeros;
}

double central_derivative(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Bisect a sign change to moderate width, then Newton-polish with a central
// difference derivative (step 1e-6). Falls back to full bisection if Newton
// leaves the bracket.
double refine_root(const std::function<double(double)>& f, double a, double b, double fa,
                   double tol) {
    double fb = f(b);
    (void)fb;
    double lo = a, hi = b, flo = fa;
    for (int it = 0; it < 90; ++it) {
        if (hi - lo < 1e-4) break;
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    bool newton_ok = true;
    for (int it = 0; it < 8; ++it) {
        const double d = central_derivative(f, x, 1e-6);
        if (d == 0.0) {
            newton_ok = false;
            break;
        }
        const double step = f(x) / d;
        const double nx = x - step;
        if (nx < a || nx > b) {
            newton_ok = false;
            break;
        }
        x = nx;
        if (std::abs(step) < 0.25 * tol) break;
    }
    if (newton_ok) return x;
    for (int it = 0; it < 110; ++it) {
        if (hi - lo < tol) break;
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Minimum of |f| by golden-section over [a, b].
double refine_abs_min(const std::function<double(double)>& f, double a, double b) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = a, hi = b;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
    for (int it = 0; it < 80 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = std::abs(f(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = std::abs(f(x2));
        }
    }
    return 0.5 * (lo + hi);
}

void scan_bracket(const std::function<double(double)>& f, Interval br, int samples,
                  const RootFindOptions& opt, std::vector<Root>& out) {
    const int ns = std::max(samples, 4);
    std::vector<double> xs(ns + 1), fs(ns + 1);
    const double h = br.width() / ns;
    for (int i = 0; i <= ns; ++i) {
        xs[i] = br.lo + h * i;
        fs[i] = f(xs[i]);
    }
    for (int i = 0; i <= ns; ++i) {
        if (fs[i] == 0.0) {
            out.push_back({xs[i], 1, false});
        }
    }
    for (int i = 0; i < ns; ++i) {
        if (fs[i] * fs[i + 1] < 0.0)
            out.push_back({refine_root(f, xs[i], xs[i + 1], fs[i], opt.tol), 1, false});
    }
    // Small-|f| samples flag clusters the plain sign scan cannot resolve: an
    // unresolved pair of simple zeros, a genuine touch point, or a root
    // sitting (at rounding level) on a sample next to another root. A fine
    // subscan separates them; duplicates merge in the final pass.
    const double f_tol = opt.f_tol * opt.scale;
    const double deriv_tol = opt.deriv_tol * opt.scale;
    const double curv_tol = opt.curvature_tol * opt.scale;
    for (int i = 1; i < ns; ++i) {
        const bool adjacent_crossing = fs[i - 1] * fs[i] <= 0.0 || fs[i] * fs[i + 1] <= 0.0;
        const bool local_min = std::abs(fs[i]) <= std::abs(fs[i - 1]) &&
                               std::abs(fs[i]) <= std::abs(fs[i + 1]);
        if (!local_min && std::abs(fs[i]) > 1e3 * f_tol) continue;
        // A zero within the triple implies |f| at the nearest sample is at
        // most ~half the local second difference.
        const double second = std::abs(fs[i - 1] - 2.0 * fs[i] + fs[i + 1]);
        if (std::abs(fs[i]) > 2.0 * second + 1e3 * f_tol) continue;

        const double a = xs[i - 1], b = xs[i + 1];
        std::vector<double> pair_roots;
        {
            const int m = 512;
            double px = a, pf = f(a);
            for (int jj = 1; jj <= m; ++jj) {
                const double x = a + (b - a) * jj / m;
                const double fx = f(x);
                if (pf * fx < 0.0) pair_roots.push_back(refine_root(f, px, x, pf, opt.tol));
                px = x;
                pf = fx;
            }
        }
        // keep only roots the sign scan did not already isolate
        bool found_new = false;
        for (double r : pair_roots) {
            const bool known = std::any_of(out.begin(), out.end(), [&](const Root& q) {
                return std::abs(q.lambda - r) < 1e-8;
            });
            if (!known) {
                out.push_back({r, 1, false});
                found_new = true;
            }
        }
        if (found_new || !pair_roots.empty() || adjacent_crossing) continue;

        const double x = refine_abs_min(f, a, b);
        const double fx = f(x);
        const double fp = central_derivative(f, x, 1e-6);
        if (std::abs(fx) >= f_tol || std::abs(fp) >= deriv_tol) continue;
        const double hc = 1e-4 * (1.0 + std::abs(x));
        const double curv = (f(x + hc) - 2.0 * fx + f(x - hc)) / (hc * hc);
        if (std::abs(curv) > curv_tol) out.push_back({x, 2, false});
    }
}

}  // namespace

std::string_view to_string(SpectrumClass c) {
    switch (c) {
        case SpectrumClass::kSigma0Survivor: return "sigma0-survivor";
        case SpectrumClass::kSigma2Root: return "sigma2-root";
        case SpectrumClass::kDoublePoint: return "double";
    }
    return "unknown";
}

std::optional<SpectrumClass> spectrum_class_from(std::string_view s) {
    if (s == "sigma0-survivor") return SpectrumClass::kSigma0Survivor;
    if (s == "sigma2-root") return SpectrumClass::kSigma2Root;
    if (s == "double") return SpectrumClass::kDoublePoint;
    return std::nullopt;
}

std::size_t Spectrum::total_multiplicity() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += static_cast<std::size_t>(e.multiplicity);
    return n;
}

Spectrum free_spectrum(const BoundaryParams& bp, int k_min, int k_max) {
    if (k_min > k_max) throw std::invalid_argument("empty index range");
    Spectrum s;
    for (int k = k_min; k <= k_max; ++k)
        s.entries.push_back({bp.free_eigenvalue(k), 1, SpectrumClass::kSigma0Survivor, k, false});
    return s;
}

Classification classify(const OperatorSpec& spec, int k_min, int k_max, double zero_tol) {
    if (zero_tol <= 0.0) throw std::invalid_argument("zero_tol must be positive");
    Classification out;
    const BoundaryParams& bp = spec.boundary();
    const auto coeffs = spec.potential().coefficients(k_min, k_max);
    std::vector<WeightedPole> poles;
    for (const auto& [k, v] : coeffs) {
        if (std::abs(v) <= zero_tol) {
            out.sigma0.push_back(k);
        } else {
            out.sigma1.push_back(k);
            poles.push_back({bp.free_eigenvalue(k), std::norm(v)});
        }
    }
    if (spec.mu() != 0.0) out.sigma2 = secular_zeros(spec.mu(), poles);
    return out;
}

std::vector<Interval> unit_cell_brackets(const BoundaryParams& bp, Interval window) {
    std::vector<Interval> cells;
    const double m = bp.offset();
    const int k_lo = static_cast<int>(std::floor(window.lo - 1.0 - m));
    const int k_hi = static_cast<int>(std::ceil(window.hi + 1.0 - m));
    for (int k = k_lo; k <= k_hi; ++k) {
        const double c = bp.free_eigenvalue(k);
        cells.push_back({c - 0.5, c + 0.5});
    }
    return cells;
}

RootScan find_roots(const std::function<double(double)>& f, Interval window,
                    const std::vector<Interval>& brackets, const RootFindOptions& opt) {
    RootScan scan;
    std::vector<std::vector<Root>> local(brackets.size());
    std::vector<std::vector<std::string>> local_warn(brackets.size());
    parallel_for(brackets.size(), [&](std::size_t i) {
        scan_bracket(f, brackets[i], opt.samples_per_bracket, opt, local[i]);
        if (local[i].empty() && opt.expect_root_per_bracket) {
            scan_bracket(f, brackets[i], opt.samples_per_bracket * 8, opt, local[i]);
            if (local[i].empty())
                local_warn[i].push_back("missed root in bracket [" +
                                        std::to_string(brackets[i].lo) + ", " +
                                        std::to_string(brackets[i].hi) + "]");
        }
    });

    std::vector<Root> all;
    for (auto& v : local) all.insert(all.end(), v.begin(), v.end());
    for (auto& w : local_warn) scan.warnings.insert(scan.warnings.end(), w.begin(), w.end());
    std::sort(all.begin(), all.end(), [](const Root& a, const Root& b) { return a.lambda < b.lambda; });

    // Collapse noise-split touch points: a pair of nearby "simple" roots with
    // a below-threshold value in between is one double root seen through
    // rounding noise.
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        if (all[i].multiplicity != 1 || all[i + 1].multiplicity != 1) continue;
        const double gap = all[i + 1].lambda - all[i].lambda;
        if (gap <= 0.0 || gap > 1e-4) continue;
        const double mid = 0.5 * (all[i].lambda + all[i + 1].lambda);
        if (std::abs(f(mid)) < opt.f_tol * opt.scale) {
            all[i].lambda = mid;
            all[i].multiplicity = 2;
            all.erase(all.begin() + static_cast<long>(i) + 1);
        }
    }

    const double btol = std::max(opt.tol, 1e-10);
    const double merge = std::max(4.0 * opt.tol, 1e-11);
    for (const auto& r : all) {
        if (r.lambda < window.lo - btol || r.lambda > window.hi + btol) continue;
        if (!scan.roots.empty() && std::abs(scan.roots.back().lambda - r.lambda) <= merge) {
            scan.roots.back().multiplicity = std::max(scan.roots.back().multiplicity,
                                                      r.multiplicity);
            continue;
        }
        Root kept = r;
        kept.near_boundary = (std::abs(r.lambda - window.lo) <= btol ||
                              std::abs(r.lambda - window.hi) <= btol);
        scan.roots.push_back(kept);
    }
    return scan;
}

namespace {

// Multiset comparison with clustering: near-coincident roots are resolvable
// by a sampling scan only down to sqrt(f_tol/curvature), so positions are
// matched per cluster. A cluster of two or more expected roots may be
// under-resolved by the scan, but never absent altogether.
bool roots_match(const std::vector<std::pair<double, int>>& want,
                 const std::vector<std::pair<double, int>>& got, double linkage) {
    struct Ev {
        double x;
        int wm, gm;
    };
    std::vector<Ev> ev;
    for (const auto& [x, m] : want) ev.push_back({x, m, 0});
    for (const auto& [x, m] : got) ev.push_back({x, 0, m});
    std::sort(ev.begin(), ev.end(), [](const Ev& a, const Ev& b) { return a.x < b.x; });
    std::size_t i = 0;
    while (i < ev.size()) {
        std::size_t j = i;
        int wt = 0, gt = 0, wn = 0;
        while (j < ev.size() && (j == i || ev[j].x - ev[j - 1].x <= linkage)) {
            wt += ev[j].wm;
            gt += ev[j].gm;
            if (ev[j].wm > 0) ++wn;
            ++j;
        }
        const bool exact = wt == gt;
        const bool under_resolved = wn >= 2 && gt >= 1 && gt <= wt;
        if (!exact && !under_resolved) return false;
        i = j;
    }
    return true;
}

}  // namespace

Spectrum assemble(const OperatorSpec& spec, Interval window, int k_min, int k_max, double tol) {
    const BoundaryParams& bp = spec.boundary();
    const double btol = std::max(tol, 1e-10);
    Spectrum out;

    // The window is the contract: widen the index range so every free
    // eigenvalue inside it is accounted for.
    k_min = std::min(k_min, static_cast<int>(std::ceil(window.lo - bp.offset())) - 1);
    k_max = std::max(k_max, static_cast<int>(std::floor(window.hi - bp.offset())) + 1);

    if (spec.mu() == 0.0 || spec.zero_potential()) {
        for (int k = k_min; k <= k_max; ++k) {
            const double lk = bp.free_eigenvalue(k);
            if (lk < window.lo - btol || lk > window.hi + btol) continue;
            const bool nb = std::abs(lk - window.lo) <= btol || std::abs(lk - window.hi) <= btol;
            out.entries.push_back({lk, 1, SpectrumClass::kSigma0Survivor, k, nb});
        }
        return out;
    }

    CharFunEval ev(spec);
    auto dfun = [&ev](double x) { return ev.delta_real(x); };

    const auto cls = classify(spec, k_min, k_max);

    // Polish each resolvent zero on the characteristic function itself. For
    // bandlimited potentials the classification seed is already exact; for
    // projected (non-bandlimited grid) data the seed can sit at the band's
    // truncation error and Newton walks it onto the true zero of delta. Near
    // a coincident free point delta' vanishes and Newton only wanders, so a
    // step is kept only when it genuinely reduces |delta|.
    std::vector<double> sigma2 = cls.sigma2;
    for (double& b : sigma2) {
        double x = b;
        double fx = std::abs(dfun(x));
        for (int it = 0; it < 12; ++it) {
            const double d = central_derivative(dfun, x, 1e-7 * (1.0 + std::abs(x)));
            if (d == 0.0) break;
            const double step = dfun(x) / d;
            if (std::abs(step) > 0.25) break;
            const double nx = x - step;
            const double fnx = std::abs(dfun(nx));
            if (fnx >= fx) break;
            x = nx;
            fx = fnx;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
        }
        if (std::abs(x - b) <= 0.05) b = x;
    }

    std::vector<bool> consumed(sigma2.size(), false);
    const double merge_tol = 1e-9;
    for (int k : cls.sigma0) {
        const double lk = bp.free_eigenvalue(k);
        int mult = 1;
        SpectrumClass c = SpectrumClass::kSigma0Survivor;
        for (std::size_t j = 0; j < sigma2.size(); ++j) {
            if (!consumed[j] && std::abs(sigma2[j] - lk) <= merge_tol) {
                consumed[j] = true;
                mult = 2;
                c = SpectrumClass::kDoublePoint;
                break;
            }
        }
        if (lk < window.lo - btol || lk > window.hi + btol) continue;
        const bool nb = std::abs(lk - window.lo) <= btol || std::abs(lk - window.hi) <= btol;
        out.entries.push_back({lk, mult, c, k, nb});
    }
    for (std::size_t j = 0; j < sigma2.size(); ++j) {
        if (consumed[j]) continue;
        const double b = sigma2[j];
        if (b < window.lo - btol || b > window.hi + btol) continue;
        const bool nb = std::abs(b - window.lo) <= btol || std::abs(b - window.hi) <= btol;
        // exact half-gap ties resolve toward the index the root migrated from
        int kn = nearest_index(bp, b);
        const double frac = b - bp.offset() - (static_cast<double>(kn) - 0.5);
        if (spec.mu() > 0.0 && std::abs(frac) < 1e-9) --kn;
        out.entries.push_back({b, 1, SpectrumClass::kSigma2Root, kn, nb});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.lambda < b.lambda; });

    // Cross-check against a direct scan of delta over unit cells.
    RootFindOptions opt;
    opt.tol = tol;
    const auto scan = find_roots(dfun, window, unit_cell_brackets(bp, window), opt);
    std::vector<std::pair<double, int>> got, want;
    for (const auto& e : out.entries) want.push_back({e.lambda, e.multiplicity});
    for (const auto& r : scan.roots) got.push_back({r.lambda, r.multiplicity});
    if (!roots_match(want, got, 1e-4))
        throw std::runtime_error("assembly/root mismatch");
    return out;
}

std::vector<double> matrix_oracle(const OperatorSpec& spec, int k_min, int k_max) {
    // Kept deliberately separate from classify(): the rank-one update
    // eigenvalues come from pure bisection of the secular equation with its
    // own bracket logic, so the two routes can disagree if either is wrong.
    const BoundaryParams& bp = spec.boundary();
    const auto coeffs = spec.potential().coefficients(k_min, k_max);
    const double mu = spec.mu();

    std::vector<double> evs;
    std::vector<double> d;   // diagonal entries carrying a nonzero load
    std::vector<double> w2;  // squared loads
    for (const auto& [k, v] : coeffs) {
        const double w = std::norm(v);
        if (w <= 1e-20 || mu == 0.0) {
            evs.push_back(bp.free_eigenvalue(k));
        } else {
            d.push_back(bp.free_eigenvalue(k));
            w2.push_back(w);
        }
    }
    if (!d.empty() && mu != 0.0) {
        auto sec = [&](double x) {
            double s = 1.0;
            for (std::size_t i = 0; i < d.size(); ++i) s += mu * w2[i] / (d[i] - x);
            return s;
        };
        double total = 0.0;
        for (double w : w2) total += w;
        const double reach = std::abs(mu) * total + 1e-8 * (1.0 + std::abs(mu) * total);
        const std::size_t n = d.size();
        for (std::size_t j = 0; j < n; ++j) {
            // For mu > 0 the root attached to d[j] lives in (d[j], next pole
            // or d[j] + reach); mirrored for mu < 0.
            double lo, hi;
            if (mu > 0.0) {
                lo = d[j];
                hi = (j + 1 < n) ? d[j + 1] : d[j] + reach;
            } else {
                hi = d[j];
                lo = (j > 0) ? d[j - 1] : d[j] - reach;
            }
            // Move endpoints off the poles until the signs bracket the root.
            // For mu > 0 the function dives to -inf just above d[j] and is
            // positive below the next pole; mirrored for mu < 0.
            const double span = hi - lo;
            double a = lo, b = hi;
            double da = span * 1e-3, db = span * 1e-3;
            if (mu > 0.0) {
                while (da > 1e-15 * (1.0 + std::abs(lo)) && sec(lo + da) >= 0.0) da *= 0.1;
                a = lo + da;
                if (j + 1 < n) {
                    while (db > 1e-15 * (1.0 + std::abs(hi)) && sec(hi - db) <= 0.0) db *= 0.1;
                    b = hi - db;
                }
            } else {
                while (db > 1e-15 * (1.0 + std::abs(hi)) && sec(hi - db) >= 0.0) db *= 0.1;
                b = hi - db;
                if (j > 0) {
                    while (da > 1e-15 * (1.0 + std::abs(lo)) && sec(lo + da) <= 0.0) da *= 0.1;
                    a = lo + da;
                }
            }
            double fa = sec(a);
            if (fa * sec(b) > 0.0) {
                evs.push_back(d[j] + mu * w2[j]);  // perturbatively small load
                continue;
            }
            for (int it = 0; it < 130; ++it) {
                const double mid = 0.5 * (a + b);
                if (b - a < 1e-15 * (1.0 + std::abs(mid))) break;
                const double fm = sec(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            evs.push_back(0.5 * (a + b));
        }
    }
    std::sort(evs.begin(), evs.end());
    return evs;
}

}  // namespace dirac
