#pragma once

// Donnan-equilibrium estimators: given a small charged compartment (an ion
// channel, a porous electrode) connected to a finite bath, estimate the
// bulk depletion parameter alpha and the bath-to-compartment volume ratio
// needed to keep depletion below a target.  Also dimensional helpers
// (Debye length, thermal-voltage scaling) for translating lab units into
// the nondimensional ones used by the solvers.

#include <cmath>
#include <stdexcept>

#include "constants.hpp"

namespace ccpb::donnan {

struct PhysicalConditions {
    double concentration_molar;      // bulk salt concentration, mol / L
    double temperature;              // K
    double relative_permittivity;    // dimensionless
    double voltage = 0.0;            // applied half-voltage, V (any sign)
};

inline void validate(const PhysicalConditions& c) {
    if (!(c.concentration_molar > 0.0) || !(c.temperature > 0.0) ||
        !(c.relative_permittivity > 0.0))
        throw std::invalid_argument(
            "PhysicalConditions: concentration, temperature, and permittivity "
            "must be positive");
}

// lambda_D = sqrt(eps0 eps_r kB T / (2 nbar q^2)), nbar in 1/m^3.
inline double debye_length(const PhysicalConditions& c) {
    validate(c);
    const double number_density =
        c.concentration_molar * 1.0e3 * constants::avogadro;
    const double q = constants::elementary_charge;
    return std::sqrt(constants::vacuum_permittivity * c.relative_permittivity *
                     constants::boltzmann * c.temperature /
                     (2.0 * number_density * q * q));
}

// q V / (kB T): volts to thermal units.
inline double nondim_voltage(const PhysicalConditions& c) {
    if (!(c.temperature > 0.0))
        throw std::invalid_argument("nondim_voltage: temperature must be positive");
    return constants::elementary_charge * c.voltage /
           (constants::boltzmann * c.temperature);
}

// meters to Debye lengths.
inline double nondim_length(const PhysicalConditions& c, double x_meters) {
    return x_meters / debye_length(c);
}

struct ChannelGeometry {
    double volume_ratio_delta;  // |channel| / |bath|, > 0
    double enrichment_r;        // counterion enrichment p_channel / cbar, > 1
};

struct ChannelAlpha {
    double exact;       // root of the conservation relation
    double linearized;  // 1 / (1 + (r-1) delta / 2)
};

// A channel of relative volume delta holds counterions at r times the bath
// concentration; ion conservation over bath + channel fixes how far the
// bath is depleted.  With f = delta / (2 + delta) the channel's share of
// the total volume (two bath reservoirs), conservation reads
//   1 = alpha (1 - f) + r f,
// whose root simplifies to alpha = 1 - (r - 1) delta / 2.
inline ChannelAlpha channel_alpha(const ChannelGeometry& g) {
    if (!(g.volume_ratio_delta >= 0.0))
        throw std::invalid_argument("channel_alpha: volume ratio must be >= 0");
    if (!(g.enrichment_r > 1.0))
        throw std::invalid_argument("channel_alpha: enrichment must exceed 1");
    const double f = g.volume_ratio_delta / (2.0 + g.volume_ratio_delta);
    const double exact = (1.0 - g.enrichment_r * f) / (1.0 - f);
    if (!(exact > 0.0))
        throw std::domain_error(
            "channel_alpha: no admissible root, channel volume too large for "
            "this enrichment");
    return {exact, 1.0 / (1.0 + 0.5 * (g.enrichment_r - 1.0) *
                                    g.volume_ratio_delta)};
}

// Bath-to-channel volume ratio 1/delta keeping the depletion below
// max_error: (r-1)/2 * delta = max_error.
inline double channel_bath_ratio(double r, double max_error) {
    if (!(r > 1.0))
        throw std::invalid_argument("channel_bath_ratio: enrichment must exceed 1");
    if (!(max_error > 0.0 && max_error < 1.0))
        throw std::invalid_argument("channel_bath_ratio: max_error must be in (0,1)");
    return 0.5 * (r - 1.0) / max_error;
}

struct ElectrodeGeometry {
    double volume_fraction_electrode;  // one electrode's share of the cell, in (0, 1/2]
    double donnan_potential;           // thermal units, any sign
    double porosity;                   // electrolyte-accessible fraction, in (0, 1)
};

inline void validate(const ElectrodeGeometry& g) {
    if (!(g.volume_fraction_electrode > 0.0 &&
          g.volume_fraction_electrode <= 0.5))
        throw std::invalid_argument(
            "ElectrodeGeometry: electrode fraction must lie in (0, 1/2] so that "
            "bulk + 2 electrodes fill the cell");
    if (!(g.porosity > 0.0 && g.porosity < 1.0))
        throw std::invalid_argument("ElectrodeGeometry: porosity must lie in (0,1)");
}

// Two symmetric porous electrodes at Donnan potential +-phi hold ions at
// cosh(phi) times the bulk level:
//   1/alpha = f_bulk + 2 f_electrode cosh(phi),   f_bulk = 1 - 2 f_electrode.
inline double electrode_alpha(const ElectrodeGeometry& g) {
    validate(g);
    const double fe = g.volume_fraction_electrode;
    return 1.0 / (1.0 - 2.0 * fe + 2.0 * fe * std::cosh(g.donnan_potential));
}

struct ElectrodeBulkRatio {
    double cosh_form;       // 2 ((1-d) cosh(phi) - 1) / d
    double depletion_form;  // porosity * (2/d) * ((1-d) - exp(-phi))
};

// Required bulk-to-electrode volume ratio for depletion below delta_err.
// Two conventions are in circulation and they disagree by orders of
// magnitude at large phi; both are returned, labeled.  The cosh form counts
// total ion adsorption (counterions and coions); the depletion form counts
// only the net coion deficit, scaled by porosity.
inline ElectrodeBulkRatio electrode_bulk_ratio(double phi_el, double delta_err,
                                               double porosity) {
    if (!(delta_err > 0.0 && delta_err < 1.0))
        throw std::invalid_argument(
            "electrode_bulk_ratio: delta_err must lie in (0,1)");
    const double d = delta_err;
    return {2.0 * ((1.0 - d) * std::cosh(phi_el) - 1.0) / d,
            porosity * (2.0 / d) * ((1.0 - d) - std::exp(-phi_el))};
}

}  // namespace ccpb::donnan
