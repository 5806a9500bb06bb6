#pragma once

#include "dcgroup/ball.hpp"
#include "dcgroup/catalog.hpp"
#include "dcgroup/conjugacy.hpp"
#include "dcgroup/dc_engine.hpp"
#include "dcgroup/direct_product.hpp"
#include "dcgroup/element.hpp"
#include "dcgroup/error.hpp"
#include "dcgroup/finite_table.hpp"
#include "dcgroup/free_group.hpp"
#include "dcgroup/group.hpp"
#include "dcgroup/group_spec.hpp"
#include "dcgroup/heisenberg.hpp"
#include "dcgroup/index_meter.hpp"
#include "dcgroup/infinite_dihedral.hpp"
#include "dcgroup/measure.hpp"
#include "dcgroup/numeric.hpp"
#include "dcgroup/structure_finite.hpp"
#include "dcgroup/zpow.hpp"
