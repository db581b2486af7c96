#pragma once

#include "abelcensus/abelian_group.hpp"
#include "abelcensus/arith.hpp"
#include "abelcensus/asymptotics.hpp"
#include "abelcensus/census_run.hpp"
#include "abelcensus/enumerator.hpp"
#include "abelcensus/errors.hpp"
#include "abelcensus/group_structure.hpp"
#include "abelcensus/index_value.hpp"
#include "abelcensus/invariants.hpp"
#include "abelcensus/local_counts.hpp"
#include "abelcensus/primes.hpp"
#include "abelcensus/profile.hpp"
#include "abelcensus/series.hpp"
#include "abelcensus/structure.hpp"
