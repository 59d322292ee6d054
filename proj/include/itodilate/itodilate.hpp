#pragma once

#include "itodilate/types.hpp"
#include "itodilate/ito_algebra.hpp"
#include "itodilate/semigroup.hpp"
#include "itodilate/birth.hpp"
#include "itodilate/dilation_data.hpp"
#include "itodilate/germ.hpp"
#include "itodilate/cpd.hpp"
#include "itodilate/dilation.hpp"
#include "itodilate/coherent.hpp"
#include "itodilate/poisson_mc.hpp"
#include "itodilate/pseudo_poisson.hpp"
#include "itodilate/random_models.hpp"
#include "itodilate/json_io.hpp"
