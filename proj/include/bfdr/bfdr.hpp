#pragma once

// Conformal novelty detection with boundary-FDR control: conformal p-values,
// the support-line procedure family, subsampled variants, local-fdr
// estimators, and a Monte Carlo engine for validating the control guarantees.

#include "bfdr/errors.hpp"
#include "bfdr/exact.hpp"
#include "bfdr/io.hpp"
#include "bfdr/lfdr.hpp"
#include "bfdr/method.hpp"
#include "bfdr/montecarlo.hpp"
#include "bfdr/parse.hpp"
#include "bfdr/procedures.hpp"
#include "bfdr/pvalues.hpp"
#include "bfdr/rng.hpp"
#include "bfdr/subsample.hpp"
