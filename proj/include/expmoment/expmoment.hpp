#pragma once

#include "expmoment/campaigns.hpp"
#include "expmoment/core.hpp"
#include "expmoment/error.hpp"
#include "expmoment/eval.hpp"
#include "expmoment/fejer.hpp"
#include "expmoment/io.hpp"
#include "expmoment/quadrature.hpp"
#include "expmoment/rademacher.hpp"
#include "expmoment/spectral.hpp"
#include "expmoment/verification.hpp"
#include "expmoment/zeta.hpp"
