#pragma once

#include "lrpmor/balanced_truncation.hpp"
#include "lrpmor/error_surface.hpp"
#include "lrpmor/errors.hpp"
#include "lrpmor/lyapunov.hpp"
#include "lrpmor/matrix_market.hpp"
#include "lrpmor/models.hpp"
#include "lrpmor/norms.hpp"
#include "lrpmor/optimize.hpp"
#include "lrpmor/parametric.hpp"
#include "lrpmor/pipelines.hpp"
#include "lrpmor/reduced_model.hpp"
#include "lrpmor/spectral.hpp"
#include "lrpmor/state_space.hpp"
#include "lrpmor/types.hpp"
#include "lrpmor/vector_fitting.hpp"
