#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "heis/contact.hpp"
#include "heis/density.hpp"
#include "heis/report.hpp"
#include "heis/surface.hpp"

namespace heis {

/// Builds a map from a registry name:
///   "identity", "rotation:theta", "dilation:delta",
///   "translation:x,y,s", "inversion", "stretch:k",
///   "compose:a|b" (a after b; "a|compose|b" is accepted as an alias).
/// Throws UnknownMap on anything else.
ContactMap make_map(const std::string& name);

/// Parsed surface-spec file: the patch, its quadrature region, and the ring
/// when one is given (needed for the built-in densities).
struct SurfaceSpec {
    SurfacePatch patch;
    num::Rect region;
    std::optional<SphericalRing> ring;
    std::string type;
};

/// Parses the JSON surface document
///   {"type": "cone"|"graph-psi"|"plane-t0"|"gauge-sphere",
///    "ring": {"a": .., "b": ..}, "params": {...}}.
/// graph-psi params: {"psi0": .., "terms": [{"eps","p","q","phase"}]}
/// meaning psi = psi0 + sum eps sin(p xi + q eta + phase), validated to
/// stay inside (-pi/2, pi/2).
SurfaceSpec parse_surface_spec(const std::string& json_text);

/// Default quadrature order (64) unless HEISMOD_QUAD_N overrides it.
int default_quad_n();

// Command-level entry points mirrored by the C API and the CLI.
Report cmd_mod_cones(double a, double b, int quad_n);
Report cmd_verify_stretch(double k, double a, double b);
Report cmd_contact_check(const std::string& map_name, int samples,
                         std::uint64_t seed);
Report cmd_surface(const std::string& spec_json, const std::string& rho,
                   bool with_flow, std::string* flow_csv);

/// "psi,distortion" CSV of the stretch's leaf distortion profile.
std::string leaf_distortion_csv(double k);

} // namespace heis
