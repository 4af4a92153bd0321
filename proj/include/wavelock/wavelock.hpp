#pragma once

#include "wavelock/core.hpp"
#include "wavelock/numerics.hpp"
#include "wavelock/quadrature.hpp"
#include "wavelock/profile.hpp"
#include "wavelock/closed_form.hpp"
#include "wavelock/solver.hpp"
#include "wavelock/weight.hpp"
#include "wavelock/oracle.hpp"
#include "wavelock/verifier.hpp"
#include "wavelock/report.hpp"
#include "wavelock/verification.hpp"
