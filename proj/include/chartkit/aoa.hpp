#pragma once

#include "chartkit/spectrum.hpp"
#include "chartkit/subspace.hpp"

namespace chartkit {

// Angle-of-arrival pseudo-spectra over a theta grid. Each call builds its own
// steering table; pipelines that process many UEs should build the table once
// and call the *_spectrum functions directly.

Spectrum music_theta(const SubspaceSplit& split, const AngleGrid& grid = {});

/// When `chol` is non-null it must satisfy chol * chol^H = R and the spectrum
/// is evaluated as ||chol^H a||^2.
Spectrum bartlett_theta(const CovarianceMatrix& r, const AngleGrid& grid = {},
                        const CMatrix* chol = nullptr);

Spectrum mvdr_theta(const CovarianceMatrix& r, const AngleGrid& grid, double loading);

Spectrum minnorm_theta(const SubspaceSplit& split, const AngleGrid& grid = {});

}  // namespace chartkit
