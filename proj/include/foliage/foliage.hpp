#pragma once

#include <foliage/catalog.hpp>
#include <foliage/error.hpp>
#include <foliage/forms.hpp>
#include <foliage/graph.hpp>
#include <foliage/leaves.hpp>
#include <foliage/model.hpp>
#include <foliage/orbifold.hpp>
#include <foliage/report.hpp>
#include <foliage/scalar.hpp>
#include <foliage/scenario.hpp>
#include <foliage/surgery.hpp>
#include <foliage/svg.hpp>
