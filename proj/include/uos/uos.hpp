#ifndef UOS_UOS_HPP
#define UOS_UOS_HPP

#include "uos/analysis.hpp"
#include "uos/config.hpp"
#include "uos/core.hpp"
#include "uos/experiments.hpp"
#include "uos/io.hpp"
#include "uos/models.hpp"
#include "uos/operators.hpp"
#include "uos/solver.hpp"
#include "uos/table.hpp"
#include "uos/version.hpp"

#endif  // UOS_UOS_HPP
