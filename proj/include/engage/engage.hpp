#pragma once

// Everything except the HTTP backend and the command-line front end, which
// pull in httplib/OpenSSL and CLI11 respectively.

#include "engage/error.hpp"

#include "engage/core/instrument.hpp"
#include "engage/core/parallel.hpp"
#include "engage/core/session_io.hpp"
#include "engage/core/textio.hpp"
#include "engage/core/timeline.hpp"
#include "engage/core/types.hpp"
#include "engage/core/validate.hpp"

#include "engage/features/emotion.hpp"
#include "engage/features/geometry.hpp"
#include "engage/features/windows.hpp"

#include "engage/fusion/render.hpp"
#include "engage/fusion/turns.hpp"

#include "engage/llm/parse.hpp"
#include "engage/llm/questionnaire.hpp"
#include "engage/llm/rate_limiter.hpp"
#include "engage/llm/types.hpp"

#include "engage/baselines/cv.hpp"
#include "engage/baselines/features.hpp"
#include "engage/baselines/kernels.hpp"
#include "engage/baselines/models.hpp"

#include "engage/eval/metrics.hpp"
#include "engage/eval/records.hpp"
#include "engage/eval/report.hpp"

#include "engage/synth/generator.hpp"
#include "engage/synth/mock_backend.hpp"
#include "engage/synth/rng.hpp"
