#pragma once

#include "qmas/access_structure.hpp"
#include "qmas/code_builder.hpp"
#include "qmas/errors.hpp"
#include "qmas/gf.hpp"
#include "qmas/matrix.hpp"
#include "qmas/optimizer.hpp"
#include "qmas/pipeline.hpp"
#include "qmas/rng.hpp"
#include "qmas/serialize.hpp"
#include "qmas/simulator.hpp"
#include "qmas/verifier.hpp"
