#pragma once

#include "errors.hpp"
#include "field.hpp"
#include "vbf.hpp"
#include "params.hpp"
#include "constructions.hpp"
#include "theory.hpp"
#include "invariants.hpp"
