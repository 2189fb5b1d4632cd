#pragma once

// Umbrella header for the ksv contextuality verification toolkit.

#include "ksv/bell.hpp"
#include "ksv/bound.hpp"
#include "ksv/catalog.hpp"
#include "ksv/equivalence.hpp"
#include "ksv/errors.hpp"
#include "ksv/exp_data.hpp"
#include "ksv/feasibility.hpp"
#include "ksv/model.hpp"
#include "ksv/model_io.hpp"
#include "ksv/pauli.hpp"
#include "ksv/state_vector.hpp"
