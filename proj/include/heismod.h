/* heismod — C API for the Heisenberg-group surface-modulus toolkit.
 *
 * All objects are opaque handles; all functions return a status code.
 * Points are passed as double[3] = (x, y, t); log coordinates as
 * double[3] = (xi, psi, eta). A human-readable message for the most
 * recent failure on the calling thread is available via hm_last_error().
 */
#ifndef HEISMOD_H
#define HEISMOD_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hm_status {
    HM_OK = 0,
    HM_ERR_INVALID_ARGUMENT = 1,
    HM_ERR_ON_VERTICAL_AXIS = 2,
    HM_ERR_PSI_OUT_OF_RANGE = 3,
    HM_ERR_INVERSION_AT_ORIGIN = 4,
    HM_ERR_CHARACTERISTIC_POINT = 5,
    HM_ERR_DEGENERATE_DERIVATIVE = 6,
    HM_ERR_DERIV_ORACLE_FAILURE = 7,
    HM_ERR_QUADRATURE_NON_CONVERGENCE = 8,
    HM_ERR_POINT_NOT_ON_FOLIATION = 9,
    HM_ERR_ZERO_DENOMINATOR = 10,
    HM_ERR_UNKNOWN_MAP = 11,
    HM_ERR_SPEC_PARSE = 12,
    HM_ERR_K_OUT_OF_RANGE = 13,
    HM_ERR_NOT_LEAF_CONSTANT = 14,
    HM_ERR_INTERNAL = 15
} hm_status;

/* Stable name of a status code, e.g. "HM_ERR_UNKNOWN_MAP". */
const char* hm_status_name(hm_status status);

/* Message of the last failure on this thread; empty string if none. */
const char* hm_last_error(void);

/* ---- group arithmetic and the logarithmic chart ---- */

hm_status hm_group_mul(const double p[3], const double q[3], double out[3]);
hm_status hm_group_inv(const double p[3], double out[3]);
hm_status hm_gauge(const double p[3], double* out);
hm_status hm_dist(const double p[3], const double q[3], double* out);

hm_status hm_phi(const double logq[3], double out[3]);
hm_status hm_phi_inv(const double p[3], double out[3]);

/* ---- contact maps ---- */

typedef struct hm_map hm_map;

/* name: "identity", "rotation:t", "dilation:d", "translation:x,y,s",
 * "inversion", "stretch:k", "compose:a|b". */
hm_status hm_map_create(const char* name, hm_map** out);
void hm_map_free(hm_map* map);

hm_status hm_map_apply(const hm_map* map, const double p[3], double out[3]);

/* mu_out = (Re mu, Im mu); any output pointer may be NULL. */
hm_status hm_map_beltrami(const hm_map* map, const double p[3],
                          double mu_out[2], double* k_out, double* lambda_out,
                          double* jac_out);

/* Absolute contact residuals |C1|, |C2| and the C3 value lambda, by finite
 * differences along the group flows with the given step (0 = default). */
hm_status hm_map_contact_residuals(const hm_map* map, const double p[3],
                                   double fd_step, double* r1_abs,
                                   double* r2_abs, double* lambda_out);

/* ---- surfaces ---- */

typedef struct hm_surface hm_surface;

/* spec_json: same schema as the CLI surface files. */
hm_status hm_surface_create(const char* spec_json, hm_surface** out);
void hm_surface_free(hm_surface* surface);

hm_status hm_surface_horizontal_area(const hm_surface* surface, double* out);

/* Horizontal normal at (u, v): components, norm, characteristic flag.
 * Output pointers may be NULL. */
hm_status hm_surface_normal(const hm_surface* surface, double u, double v,
                            double nh_out[2], double* norm_out,
                            int* characteristic_out);

/* ---- command-level entry points (JSON reports) ----
 *
 * Each fills *report_json with a heap string (free with hm_string_free)
 * and *all_pass with 1 when every check in the report passed.
 */

hm_status hm_cmd_mod_cones(double a, double b, int quad_n, char** report_json,
                           int* all_pass);

/* leaf_csv, when non-NULL, receives "psi,distortion" plot data for the
 * stretch's leaf-constant distortion profile. */
hm_status hm_cmd_verify_stretch(double k, double a, double b,
                                char** report_json, char** leaf_csv,
                                int* all_pass);

hm_status hm_cmd_contact_check(const char* map_name, int samples,
                               unsigned long long seed, char** report_json,
                               int* all_pass);

/* rho: "none", "rho23" or "rho2". If with_flow is nonzero and flow_csv is
 * non-NULL, *flow_csv receives the flow-line polylines as CSV text. */
hm_status hm_cmd_surface(const char* spec_json, const char* rho, int with_flow,
                         char** report_json, char** flow_csv, int* all_pass);

void hm_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* HEISMOD_H */
