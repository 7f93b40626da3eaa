#pragma once

#include "csphere/averages.hpp"
#include "csphere/bump.hpp"
#include "csphere/checks.hpp"
#include "csphere/counting.hpp"
#include "csphere/equidist.hpp"
#include "csphere/expsums.hpp"
#include "csphere/fft.hpp"
#include "csphere/floor_pow.hpp"
#include "csphere/manifest.hpp"
#include "csphere/oracles.hpp"
#include "csphere/rational.hpp"
#include "csphere/regvar.hpp"
#include "csphere/sha256.hpp"
#include "csphere/surface.hpp"
#include "csphere/util.hpp"
