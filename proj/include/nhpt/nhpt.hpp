// nhpt.hpp — umbrella header.

#pragma once

#include "nhpt/operators.hpp"
#include "nhpt/pulses.hpp"
#include "nhpt/spectrum.hpp"
#include "nhpt/dynamics.hpp"
#include "nhpt/transition_matrix.hpp"
#include "nhpt/perturbation.hpp"
#include "nhpt/scenarios.hpp"
#include "nhpt/verify.hpp"
#include "nhpt/io.hpp"
#include "nhpt/parallel.hpp"
