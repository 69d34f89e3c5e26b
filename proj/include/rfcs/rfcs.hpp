#pragma once

#include "rfcs/bench.hpp"
#include "rfcs/errors.hpp"
#include "rfcs/instance.hpp"
#include "rfcs/io.hpp"
#include "rfcs/oracle.hpp"
#include "rfcs/policy.hpp"
#include "rfcs/rng.hpp"
#include "rfcs/routefirst.hpp"
#include "rfcs/split.hpp"
