#include "dispersia/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dispersia/diagnostics.hpp"

namespace dispersia {

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
    const unsigned threads =
        static_cast<unsigned>(std::min<std::size_t>(std::max(workers, 1u), count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr firstError;
    std::mutex errorMutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(errorMutex);
                    if (!firstError) firstError = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (firstError) std::rethrow_exception(firstError);
}

double error_x(const SpectralField& a, const SpectralField& b, int j) {
    return x_norm(a - b, j);
}

namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void require(bool condition, const std::string& field, const std::string& message) {
    if (!condition) throw std::invalid_argument(field + ": " + message);
}

void require_steps(double zFinal, double tau, const std::string& field) {
    try {
        step_count(zFinal, tau);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(field + ": " + e.what());
    }
}

StepperKind reference_for(const SweepConfig& cfg, StepperKind scheme) {
    return cfg.referenceScheme.value_or(scheme);
}

SolveConfig cell_config(const SweepConfig& cfg, double epsilon, double tau, StepperKind scheme) {
    SolveConfig c = cfg.base;
    c.model = cfg.base.model.with_epsilon(epsilon);
    c.tau = tau;
    c.scheme = scheme;
    c.snapshotStride = 0;
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void finish_record(ErrorRecord& rec, const SweepConfig& cfg, const DispersiveModel& model) {
    rec.normalizer = normalizer(cfg, model, rec.tau);
    rec.normalizedError = rec.errorX / rec.normalizer;
}

std::vector<ErrorRecord> run_convergence(const SweepConfig& cfg) {
    validate(cfg);
    const auto& eps = cfg.epsilons;
    const auto& taus = cfg.taus;

    // References, one per distinct (reference scheme, eps).
    std::vector<StepperKind> refSchemes;
    for (auto s : cfg.schemes) {
        const auto r = reference_for(cfg, s);
        if (std::find(refSchemes.begin(), refSchemes.end(), r) == refSchemes.end()) {
            refSchemes.push_back(r);
        }
    }
    struct Reference {
        std::optional<SpectralField> field;
        std::string failure;
    };
    std::vector<Reference> refs(refSchemes.size() * eps.size());
    parallel_for(refs.size(), cfg.workers, [&](std::size_t i) {
        const auto scheme = refSchemes[i / eps.size()];
        const double e = eps[i % eps.size()];
        try {
            refs[i].field = solve(cell_config(cfg, e, cfg.referenceTau, scheme)).final;
        } catch (const std::exception& ex) {
            refs[i].failure = "reference " + std::string(to_string(scheme)) + " eps=" +
                              format_number(e) + ": " + ex.what();
        }
    });
    auto refIndex = [&](StepperKind scheme, std::size_t ei) {
        const auto r = reference_for(cfg, scheme);
        const auto pos = static_cast<std::size_t>(
            std::find(refSchemes.begin(), refSchemes.end(), r) - refSchemes.begin());
        return pos * eps.size() + ei;
    };

    std::vector<ErrorRecord> records(cfg.schemes.size() * eps.size() * taus.size());
    parallel_for(records.size(), cfg.workers, [&](std::size_t i) {
        const std::size_t si = i / (eps.size() * taus.size());
        const std::size_t ei = (i / taus.size()) % eps.size();
        const std::size_t ti = i % taus.size();
        const auto scheme = cfg.schemes[si];
        const auto model = cfg.base.model.with_epsilon(eps[ei]);

        ErrorRecord& rec = records[i];
        rec.scheme = scheme;
        rec.kappa = model.kappa();
        rec.alpha = model.alpha();
        rec.epsilon = eps[ei];
        rec.tau = taus[ti];
        rec.zFinal = cfg.base.zFinal;
        rec.j = cfg.derivOrder;

        const auto& ref = refs[refIndex(scheme, ei)];
        try {
            finish_record(rec, cfg, model);
            if (!ref.field) {
                rec.failure = ref.failure;
                rec.errorX = std::nan("");
                rec.normalizedError = std::nan("");
                return;
            }
            const auto start = std::chrono::steady_clock::now();
            const auto sol = solve(cell_config(cfg, eps[ei], taus[ti], scheme));
            rec.wallTime = seconds_since(start);
            rec.errorX = error_x(*ref.field, sol.final, cfg.derivOrder);
            rec.normalizedError = rec.errorX / rec.normalizer;
        } catch (const std::exception& ex) {
            rec.failure = std::string(to_string(scheme)) + " eps=" + format_number(eps[ei]) +
                          " tau=" + format_number(taus[ti]) + ": " + ex.what();
            rec.errorX = std::nan("");
            rec.normalizedError = std::nan("");
        }
    });
    return records;
}

}  // namespace

void validate(const SweepConfig& cfg) {
    require(!cfg.epsilons.empty(), "epsilons", "at least one value required");
    require(!cfg.schemes.empty(), "schemes", "at least one scheme required");
    require(cfg.referenceTau > 0.0, "reference_tau", "must be positive");
    require(cfg.derivOrder >= 0, "deriv_order", "must be >= 0");
    for (double e : cfg.epsilons) {
        require(e > 0.0 && e <= 1.0, "epsilons", "values must lie in (0, 1]");
        require(cfg.base.grid.spacing() <= e * (1.0 + 1e-12), "epsilons",
                "eps = " + format_number(e) + " is not resolved by h = " +
                    format_number(cfg.base.grid.spacing()));
    }
    require_steps(cfg.base.zFinal, cfg.referenceTau, "reference_tau");
    for (double t : cfg.taus) {
        require(t > 0.0, "taus", "values must be positive");
        // tau == referenceTau is a self-comparison and always allowed.
        require(t == cfg.referenceTau || cfg.referenceTau <= t / 10.0 * (1.0 + 1e-12), "reference_tau",
                "must be <= min(taus) / 10 (tau = " + format_number(t) + ")");
        require_steps(cfg.base.zFinal, t, "taus");
    }
}

double normalizer(const SweepConfig& cfg, const DispersiveModel& model, double tau) {
    const double eps = model.epsilon();
    const double k = model.kappa();
    const double a = model.alpha();
    switch (cfg.normalization) {
        case Normalization::None: return 1.0;
        case Normalization::FixedPower: return std::pow(eps, cfg.fixedPower);
        case Normalization::RegularityExponent: {
            const auto r = expected_regularity_exponent(model, cfg.derivOrder);
            return std::pow(eps, r.exponent) * (r.logFactor ? std::abs(std::log(eps)) : 1.0);
        }
        case Normalization::ErrorExponent: {
            const double lnEps = std::log(1.0 / eps);
            double logTerm = 1.0;
            switch (cfg.logFactor) {
                case LogFactor::None: break;
                case LogFactor::Caption: logTerm = model.kappa() == 2 ? lnEps : 1.0; break;
                case LogFactor::Theorem: {
                    const double s = lnEps + std::abs(std::log(tau));
                    logTerm = model.kappa() == 2 ? lnEps * s * s : lnEps;
                    break;
                }
            }
            // The error bound is a sum of the two branches, so the larger term
            // (smaller exponent) governs: eps^beta up to the log factor.
            const double first = std::pow(eps, 1.0 + (k - 1.0) * a / k);
            const double second = std::pow(eps, 2.0 - 2.0 * a / k) * logTerm;
            return std::max(first, second);
        }
    }
    return 1.0;
}

std::vector<ErrorRecord> regularity_sweep(const SweepConfig& cfg) {
    require(!cfg.epsilons.empty(), "epsilons", "at least one value required");
    require(cfg.derivOrder >= 0 && cfg.derivOrder <= cfg.base.model.kappa() - 1, "deriv_order",
            "must lie in [0, kappa-1]");
    for (double e : cfg.epsilons) {
        require(e > 0.0 && e <= 1.0, "epsilons", "values must lie in (0, 1]");
        require(cfg.base.grid.spacing() <= e * (1.0 + 1e-12), "epsilons",
                "eps = " + format_number(e) + " is not resolved by h = " +
                    format_number(cfg.base.grid.spacing()));
    }
    require_steps(cfg.base.zFinal, cfg.referenceTau, "reference_tau");
    const auto scheme = cfg.referenceScheme.value_or(
        cfg.schemes.empty() ? StepperKind::ExponentialIntegrator : cfg.schemes.front());

    std::vector<ErrorRecord> records(cfg.epsilons.size());
    parallel_for(records.size(), cfg.workers, [&](std::size_t i) {
        const double e = cfg.epsilons[i];
        const auto model = cfg.base.model.with_epsilon(e);
        ErrorRecord& rec = records[i];
        rec.scheme = scheme;
        rec.kappa = model.kappa();
        rec.alpha = model.alpha();
        rec.epsilon = e;
        rec.tau = cfg.referenceTau;
        rec.zFinal = cfg.base.zFinal;
        rec.j = cfg.derivOrder;
        try {
            finish_record(rec, cfg, model);
            const auto start = std::chrono::steady_clock::now();
            const auto config = cell_config(cfg, e, cfg.referenceTau, scheme);
            const auto sol = solve(config);
            const auto free = free_propagate(sample_initial(config.initial, config.grid), model,
                                             config.zFinal);
            rec.wallTime = seconds_since(start);
            rec.errorX = error_x(sol.final, free, cfg.derivOrder);
            rec.normalizedError = rec.errorX / rec.normalizer;
        } catch (const std::exception& ex) {
            rec.failure = std::string(to_string(scheme)) + " eps=" + format_number(e) + ": " +
                          ex.what();
            rec.errorX = std::nan("");
            rec.normalizedError = std::nan("");
        }
    });
    return records;
}

std::vector<ErrorRecord> convergence_sweep(const SweepConfig& cfg) {
    require(!cfg.taus.empty(), "taus", "at least one value required");
    return run_convergence(cfg);
}

std::vector<ErrorRecord> compare_methods(const SweepConfig& cfg) {
    require(cfg.schemes.size() >= 2, "schemes", "compare needs at least two schemes");
    auto records = convergence_sweep(cfg);
    for (auto& rec : records) {
        const double threshold = std::pow(rec.epsilon, rec.kappa - rec.alpha);
        rec.regime = rec.tau <= threshold ? StepRegime::Resolved : StepRegime::Unresolved;
    }
    return records;
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("fit_rate needs at least two points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) {
            throw std::invalid_argument("fit_rate needs positive x and y");
        }
        sx += std::log(x);
        sy += std::log(y);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        const double dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_rate needs two distinct x values");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ssRes = std::max(0.0, syy - fit.slope * sxy);
    fit.rSquared = syy == 0.0 ? 1.0 : 1.0 - ssRes / syy;
    fit.pointCount = points.size();
    return fit;
}

namespace {

template <class KeyFn, class XFn>
std::vector<GroupRate> grouped_rates(std::span<const ErrorRecord> records, KeyFn key, XFn xOf) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<double, double>>> groups;
    for (const auto& r : records) {
        if (!r.ok() || !(r.errorX > 0.0)) continue;
        const auto k = key(r);
        auto [it, inserted] = groups.try_emplace(k);
        if (inserted) order.push_back(k);
        it->second.emplace_back(xOf(r), r.errorX);
    }
    std::vector<GroupRate> out;
    for (const auto& k : order) {
        const auto& pts = groups[k];
        const bool distinct = std::any_of(pts.begin(), pts.end(),
                                          [&](const auto& p) { return p.first != pts.front().first; });
        if (pts.size() < 2 || !distinct) continue;
        out.push_back({k, fit_rate(pts)});
    }
    return out;
}

}  // namespace

std::vector<GroupRate> rates_vs_tau(std::span<const ErrorRecord> records) {
    return grouped_rates(
        records,
        [](const ErrorRecord& r) {
            return "vs_tau:scheme=" + std::string(to_string(r.scheme)) +
                   ":epsilon=" + format_number(r.epsilon) + ":j=" + std::to_string(r.j);
        },
        [](const ErrorRecord& r) { return r.tau; });
}

std::vector<GroupRate> rates_vs_epsilon(std::span<const ErrorRecord> records) {
    return grouped_rates(
        records,
        [](const ErrorRecord& r) {
            return "vs_epsilon:scheme=" + std::string(to_string(r.scheme)) +
                   ":tau=" + format_number(r.tau) + ":j=" + std::to_string(r.j);
        },
        [](const ErrorRecord& r) { return r.epsilon; });
}

ReferenceCheck check_reference_convergence(const SweepConfig& cfg, StepperKind scheme,
                                           double epsilon) {
    require(!cfg.taus.empty(), "taus", "at least one value required");
    const double finest = *std::min_element(cfg.taus.begin(), cfg.taus.end());
    const auto refScheme = reference_for(cfg, scheme);
    const auto test = solve(cell_config(cfg, epsilon, finest, scheme)).final;
    const auto ref = solve(cell_config(cfg, epsilon, cfg.referenceTau, refScheme)).final;
    const auto half = solve(cell_config(cfg, epsilon, 0.5 * cfg.referenceTau, refScheme)).final;
    ReferenceCheck out;
    out.errorAgainstReference = error_x(ref, test, cfg.derivOrder);
    out.errorAgainstHalfReference = error_x(half, test, cfg.derivOrder);
    out.relativeDifference = std::abs(out.errorAgainstReference - out.errorAgainstHalfReference) /
                             out.errorAgainstHalfReference;
    return out;
}

}  // namespace dispersia
