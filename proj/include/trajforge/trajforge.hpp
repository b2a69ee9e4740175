// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "trajforge/config.hpp"
#include "trajforge/core.hpp"
#include "trajforge/envs.hpp"
#include "trajforge/eval.hpp"
#include "trajforge/jsonl.hpp"
#include "trajforge/masking.hpp"
#include "trajforge/pipeline.hpp"
#include "trajforge/policy.hpp"
#include "trajforge/react.hpp"
#include "trajforge/synthesis.hpp"
#include "trajforge/task_generator.hpp"
#include "trajforge/teacher.hpp"
