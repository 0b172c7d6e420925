#include "heismod.h"

#include <cstring>
#include <new>
#include <string>

#include "heis/contact.hpp"
#include "heis/registry.hpp"
#include "heis/surface.hpp"

namespace {

thread_local std::string g_last_error;

hm_status status_from(heis::ErrorCode code) {
    using heis::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return HM_ERR_INVALID_ARGUMENT;
        case ErrorCode::OnVerticalAxis: return HM_ERR_ON_VERTICAL_AXIS;
        case ErrorCode::PsiOutOfRange: return HM_ERR_PSI_OUT_OF_RANGE;
        case ErrorCode::InversionAtOrigin: return HM_ERR_INVERSION_AT_ORIGIN;
        case ErrorCode::CharacteristicPoint: return HM_ERR_CHARACTERISTIC_POINT;
        case ErrorCode::DegenerateDerivative: return HM_ERR_DEGENERATE_DERIVATIVE;
        case ErrorCode::DerivOracleFailure: return HM_ERR_DERIV_ORACLE_FAILURE;
        case ErrorCode::QuadratureNonConvergence:
            return HM_ERR_QUADRATURE_NON_CONVERGENCE;
        case ErrorCode::PointNotOnFoliation: return HM_ERR_POINT_NOT_ON_FOLIATION;
        case ErrorCode::ZeroDenominator: return HM_ERR_ZERO_DENOMINATOR;
        case ErrorCode::UnknownMap: return HM_ERR_UNKNOWN_MAP;
        case ErrorCode::SpecParse: return HM_ERR_SPEC_PARSE;
        case ErrorCode::KOutOfRange: return HM_ERR_K_OUT_OF_RANGE;
        case ErrorCode::NotLeafConstant: return HM_ERR_NOT_LEAF_CONSTANT;
        case ErrorCode::Internal: return HM_ERR_INTERNAL;
    }
    return HM_ERR_INTERNAL;
}

template <typename Fn>
hm_status guarded(Fn&& fn) {
    try {
        fn();
        return HM_OK;
    } catch (const heis::Error& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return HM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HM_ERR_INTERNAL;
    }
}

heis::Point to_point(const double p[3]) {
    return heis::Point{heis::Complex(p[0], p[1]), p[2]};
}

void from_point(const heis::Point& p, double out[3]) {
    out[0] = p.x();
    out[1] = p.y();
    out[2] = p.t;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

hm_status require(bool cond, const char* message) {
    if (cond) return HM_OK;
    g_last_error = message;
    return HM_ERR_INVALID_ARGUMENT;
}

} // namespace

struct hm_map {
    heis::ContactMap map;
};

struct hm_surface {
    heis::SurfaceSpec spec;
};

extern "C" {

const char* hm_status_name(hm_status status) {
    switch (status) {
        case HM_OK: return "HM_OK";
        case HM_ERR_INVALID_ARGUMENT: return "HM_ERR_INVALID_ARGUMENT";
        case HM_ERR_ON_VERTICAL_AXIS: return "HM_ERR_ON_VERTICAL_AXIS";
        case HM_ERR_PSI_OUT_OF_RANGE: return "HM_ERR_PSI_OUT_OF_RANGE";
        case HM_ERR_INVERSION_AT_ORIGIN: return "HM_ERR_INVERSION_AT_ORIGIN";
        case HM_ERR_CHARACTERISTIC_POINT: return "HM_ERR_CHARACTERISTIC_POINT";
        case HM_ERR_DEGENERATE_DERIVATIVE: return "HM_ERR_DEGENERATE_DERIVATIVE";
        case HM_ERR_DERIV_ORACLE_FAILURE: return "HM_ERR_DERIV_ORACLE_FAILURE";
        case HM_ERR_QUADRATURE_NON_CONVERGENCE:
            return "HM_ERR_QUADRATURE_NON_CONVERGENCE";
        case HM_ERR_POINT_NOT_ON_FOLIATION: return "HM_ERR_POINT_NOT_ON_FOLIATION";
        case HM_ERR_ZERO_DENOMINATOR: return "HM_ERR_ZERO_DENOMINATOR";
        case HM_ERR_UNKNOWN_MAP: return "HM_ERR_UNKNOWN_MAP";
        case HM_ERR_SPEC_PARSE: return "HM_ERR_SPEC_PARSE";
        case HM_ERR_K_OUT_OF_RANGE: return "HM_ERR_K_OUT_OF_RANGE";
        case HM_ERR_NOT_LEAF_CONSTANT: return "HM_ERR_NOT_LEAF_CONSTANT";
        case HM_ERR_INTERNAL: return "HM_ERR_INTERNAL";
    }
    return "HM_ERR_INTERNAL";
}

const char* hm_last_error(void) { return g_last_error.c_str(); }

hm_status hm_group_mul(const double p[3], const double q[3], double out[3]) {
    if (auto s = require(p && q && out, "null pointer argument")) return s;
    return guarded([&] { from_point(heis::group_mul(to_point(p), to_point(q)), out); });
}

hm_status hm_group_inv(const double p[3], double out[3]) {
    if (auto s = require(p && out, "null pointer argument")) return s;
    return guarded([&] { from_point(heis::group_inv(to_point(p)), out); });
}

hm_status hm_gauge(const double p[3], double* out) {
    if (auto s = require(p && out, "null pointer argument")) return s;
    return guarded([&] { *out = heis::gauge(to_point(p)); });
}

hm_status hm_dist(const double p[3], const double q[3], double* out) {
    if (auto s = require(p && q && out, "null pointer argument")) return s;
    return guarded([&] { *out = heis::dist(to_point(p), to_point(q)); });
}

hm_status hm_phi(const double logq[3], double out[3]) {
    if (auto s = require(logq && out, "null pointer argument")) return s;
    return guarded([&] {
        from_point(heis::phi(heis::LogPoint{logq[0], logq[1], logq[2]}), out);
    });
}

hm_status hm_phi_inv(const double p[3], double out[3]) {
    if (auto s = require(p && out, "null pointer argument")) return s;
    return guarded([&] {
        const heis::LogPoint q = heis::phi_inv(to_point(p));
        out[0] = q.xi;
        out[1] = q.psi;
        out[2] = q.eta;
    });
}

hm_status hm_map_create(const char* name, hm_map** out) {
    if (auto s = require(name && out, "null pointer argument")) return s;
    return guarded([&] { *out = new hm_map{heis::make_map(name)}; });
}

void hm_map_free(hm_map* map) { delete map; }

hm_status hm_map_apply(const hm_map* map, const double p[3], double out[3]) {
    if (auto s = require(map && p && out, "null pointer argument")) return s;
    return guarded([&] { from_point(map->map(to_point(p)), out); });
}

hm_status hm_map_beltrami(const hm_map* map, const double p[3], double mu_out[2],
                          double* k_out, double* lambda_out, double* jac_out) {
    if (auto s = require(map && p, "null pointer argument")) return s;
    return guarded([&] {
        const heis::BeltramiData b = heis::beltrami(map->map, to_point(p));
        if (mu_out) {
            mu_out[0] = b.mu.real();
            mu_out[1] = b.mu.imag();
        }
        if (k_out) *k_out = b.K;
        if (lambda_out) *lambda_out = b.lambda;
        if (jac_out) *jac_out = b.jac;
    });
}

hm_status hm_map_contact_residuals(const hm_map* map, const double p[3],
                                   double fd_step, double* r1_abs, double* r2_abs,
                                   double* lambda_out) {
    if (auto s = require(map && p, "null pointer argument")) return s;
    return guarded([&] {
        const heis::Point pt = to_point(p);
        const double h =
            fd_step > 0.0 ? fd_step : map->map.default_fd_step(pt);
        const heis::ContactResiduals r =
            heis::contact_residuals_fd(map->map, pt, h);
        if (r1_abs) *r1_abs = std::abs(r.r1);
        if (r2_abs) *r2_abs = std::abs(r.r2);
        if (lambda_out) *lambda_out = r.lambda;
    });
}

hm_status hm_surface_create(const char* spec_json, hm_surface** out) {
    if (auto s = require(spec_json && out, "null pointer argument")) return s;
    return guarded([&] {
        *out = new hm_surface{heis::parse_surface_spec(spec_json)};
    });
}

void hm_surface_free(hm_surface* surface) { delete surface; }

hm_status hm_surface_horizontal_area(const hm_surface* surface, double* out) {
    if (auto s = require(surface && out, "null pointer argument")) return s;
    return guarded([&] {
        *out = heis::horizontal_area(surface->spec.patch, surface->spec.region,
                                     heis::default_quad_n());
    });
}

hm_status hm_surface_normal(const hm_surface* surface, double u, double v,
                            double nh_out[2], double* norm_out,
                            int* characteristic_out) {
    if (auto s = require(surface != nullptr, "null pointer argument")) return s;
    return guarded([&] {
        const heis::NormalData nd =
            heis::horizontal_normal(surface->spec.patch, u, v);
        if (nh_out) {
            nh_out[0] = nd.n_h.a;
            nh_out[1] = nd.n_h.b;
        }
        if (norm_out) *norm_out = nd.norm;
        if (characteristic_out) *characteristic_out = nd.is_characteristic ? 1 : 0;
    });
}

hm_status hm_cmd_mod_cones(double a, double b, int quad_n, char** report_json,
                           int* all_pass) {
    if (auto s = require(report_json != nullptr, "null pointer argument")) return s;
    return guarded([&] {
        const heis::Report rep = heis::cmd_mod_cones(a, b, quad_n);
        *report_json = dup_string(rep.dump());
        if (all_pass) *all_pass = rep.pass() ? 1 : 0;
    });
}

hm_status hm_cmd_verify_stretch(double k, double a, double b, char** report_json,
                                char** leaf_csv, int* all_pass) {
    if (auto s = require(report_json != nullptr, "null pointer argument")) return s;
    return guarded([&] {
        const heis::Report rep = heis::cmd_verify_stretch(k, a, b);
        *report_json = dup_string(rep.dump());
        if (leaf_csv) *leaf_csv = dup_string(heis::leaf_distortion_csv(k));
        if (all_pass) *all_pass = rep.pass() ? 1 : 0;
    });
}

hm_status hm_cmd_contact_check(const char* map_name, int samples,
                               unsigned long long seed, char** report_json,
                               int* all_pass) {
    if (auto s = require(map_name && report_json, "null pointer argument")) return s;
    return guarded([&] {
        const heis::Report rep = heis::cmd_contact_check(map_name, samples, seed);
        *report_json = dup_string(rep.dump());
        if (all_pass) *all_pass = rep.pass() ? 1 : 0;
    });
}

hm_status hm_cmd_surface(const char* spec_json, const char* rho, int with_flow,
                         char** report_json, char** flow_csv, int* all_pass) {
    if (auto s = require(spec_json && rho && report_json, "null pointer argument"))
        return s;
    return guarded([&] {
        std::string csv;
        const heis::Report rep =
            heis::cmd_surface(spec_json, rho, with_flow != 0, &csv);
        *report_json = dup_string(rep.dump());
        if (flow_csv) *flow_csv = with_flow ? dup_string(csv) : nullptr;
        if (all_pass) *all_pass = rep.pass() ? 1 : 0;
    });
}

void hm_string_free(char* s) { delete[] s; }

} // extern "C"
