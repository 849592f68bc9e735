#pragma once

#include "error.hpp"
#include "numtheory.hpp"
#include "poly.hpp"
#include "cyclotomic.hpp"
#include "tower.hpp"
#include "phinorm.hpp"
#include "criterion.hpp"
#include "builder.hpp"
#include "fingerprint.hpp"
#include "expr.hpp"
#include "report.hpp"
