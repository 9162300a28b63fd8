#pragma once

#include "hofa/analysis.hpp"
#include "hofa/caps.hpp"
#include "hofa/consistency.hpp"
#include "hofa/errors.hpp"
#include "hofa/factors.hpp"
#include "hofa/field.hpp"
#include "hofa/linalg.hpp"
#include "hofa/linear_forms.hpp"
#include "hofa/ncpoly.hpp"
#include "hofa/patterns.hpp"
#include "hofa/regularity.hpp"
#include "hofa/rng.hpp"
#include "hofa/stats.hpp"
#include "hofa/tester.hpp"
