#pragma once

#include "closeknit/abstract.hpp"
#include "closeknit/contlogic.hpp"
#include "closeknit/engine.hpp"
#include "closeknit/errors.hpp"
#include "closeknit/galois.hpp"
#include "closeknit/groups.hpp"
#include "closeknit/index.hpp"
#include "closeknit/oracle.hpp"
#include "closeknit/permutation.hpp"
#include "closeknit/sets.hpp"
#include "closeknit/vect.hpp"
