#pragma once

#include "kdigo/baseline.hpp"
#include "kdigo/config.hpp"
#include "kdigo/ingest.hpp"
#include "kdigo/model.hpp"
#include "kdigo/pipeline.hpp"
#include "kdigo/preprocess.hpp"
#include "kdigo/probes.hpp"
#include "kdigo/quantity.hpp"
#include "kdigo/stage.hpp"
#include "kdigo/time.hpp"
#include "kdigo/validate.hpp"
