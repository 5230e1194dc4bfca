#pragma once

#include "apdc/color_coding.hpp"
#include "apdc/error.hpp"
#include "apdc/exact.hpp"
#include "apdc/harness.hpp"
#include "apdc/lemmas.hpp"
#include "apdc/mechanisms.hpp"
#include "apdc/model.hpp"
#include "apdc/prune.hpp"
#include "apdc/rng.hpp"
#include "apdc/sorted_dp.hpp"
