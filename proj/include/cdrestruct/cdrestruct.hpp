#pragma once

#include "cdrestruct/analysis.hpp"
#include "cdrestruct/engine.hpp"
#include "cdrestruct/generator.hpp"
#include "cdrestruct/metrics.hpp"
#include "cdrestruct/model.hpp"
#include "cdrestruct/model_io.hpp"
#include "cdrestruct/rules.hpp"
