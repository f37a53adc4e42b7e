#pragma once

#include "univalens/complex.hpp"
#include "univalens/criteria.hpp"
#include "univalens/error.hpp"
#include "univalens/expr.hpp"
#include "univalens/jet.hpp"
#include "univalens/loewner.hpp"
#include "univalens/qcext.hpp"
#include "univalens/quad.hpp"
#include "univalens/report.hpp"
#include "univalens/svg.hpp"
