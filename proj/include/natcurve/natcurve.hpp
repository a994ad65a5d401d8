#pragma once

#include "natcurve/analysis.hpp"
#include "natcurve/error.hpp"
#include "natcurve/expression.hpp"
#include "natcurve/frame.hpp"
#include "natcurve/frenet.hpp"
#include "natcurve/io.hpp"
#include "natcurve/quadric.hpp"
#include "natcurve/rational.hpp"
#include "natcurve/scalar_field.hpp"
#include "natcurve/solver.hpp"
#include "natcurve/spec.hpp"
#include "natcurve/transforms.hpp"
#include "natcurve/vec3.hpp"
#include "natcurve/zoo.hpp"
