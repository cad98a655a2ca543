#pragma once

// Umbrella header.

#include "wavesign/certify.hpp"
#include "wavesign/config.hpp"
#include "wavesign/kernel.hpp"
#include "wavesign/model.hpp"
#include "wavesign/numerics.hpp"
#include "wavesign/periodic_curve.hpp"
#include "wavesign/report.hpp"
#include "wavesign/simulate.hpp"
#include "wavesign/spectral.hpp"
#include "wavesign/speedsign.hpp"
#include "wavesign/trig_poly.hpp"
#include "wavesign/version.hpp"
