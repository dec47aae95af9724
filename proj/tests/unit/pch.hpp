#include <gtest/gtest.h>

#include <json.hpp>

#include "engage/engage.hpp"
#include "engage/llm/remote.hpp"
