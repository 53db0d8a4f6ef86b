#pragma once

#include "sqpump/csv.hpp"
#include "sqpump/fock_basis.hpp"
#include "sqpump/generator.hpp"
#include "sqpump/hamiltonian.hpp"
#include "sqpump/jump_operators.hpp"
#include "sqpump/microscopic.hpp"
#include "sqpump/observables.hpp"
#include "sqpump/rate_equation.hpp"
#include "sqpump/spectra.hpp"
#include "sqpump/steady_state.hpp"
#include "sqpump/sweep.hpp"
#include "sqpump/time_evolution.hpp"
