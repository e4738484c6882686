#pragma once

#include "nls/core/aligned.hpp"
#include "nls/core/convolution.hpp"
#include "nls/core/error.hpp"
#include "nls/core/fft.hpp"
#include "nls/core/field.hpp"
#include "nls/core/grid.hpp"
#include "nls/core/params.hpp"
#include "nls/core/quadrature.hpp"
#include "nls/core/radial.hpp"
#include "nls/core/snapshot.hpp"
#include "nls/core/spectral.hpp"
