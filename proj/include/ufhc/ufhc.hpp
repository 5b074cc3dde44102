#pragma once

#include "ufhc/errors.hpp"
#include "ufhc/sequence_space.hpp"
#include "ufhc/weight_family.hpp"
#include "ufhc/density.hpp"
#include "ufhc/criterion.hpp"
#include "ufhc/constructor.hpp"
#include "ufhc/verifier.hpp"
#include "ufhc/serialization.hpp"
#include "ufhc/config.hpp"
#include "ufhc/pipeline.hpp"
