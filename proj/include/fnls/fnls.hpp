#pragma once

// Everything except the command-line layer.

#include "fnls/error.hpp"
#include "fnls/ext_scalar.hpp"
#include "fnls/hyp_core.hpp"
#include "fnls/mat2.hpp"
#include "fnls/surface.hpp"
#include "fnls/length_engine.hpp"
#include "fnls/metrics.hpp"
#include "fnls/constructions.hpp"
#include "fnls/io.hpp"
#include "fnls/verify.hpp"
