// SPDX-License-Identifier: MIT
#pragma once

#include "wbern/basis.hpp"
#include "wbern/blend.hpp"
#include "wbern/catalog.hpp"
#include "wbern/combination.hpp"
#include "wbern/compensated_sum.hpp"
#include "wbern/errors.hpp"
#include "wbern/harness.hpp"
#include "wbern/linalg.hpp"
#include "wbern/operator.hpp"
#include "wbern/rate_fit.hpp"
#include "wbern/report_io.hpp"
#include "wbern/smoothness.hpp"
#include "wbern/smoothstep.hpp"
#include "wbern/weight.hpp"
