// Copyright 2026 The IOL Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "iol/agents.hpp"
#include "iol/common.hpp"
#include "iol/config.hpp"
#include "iol/env.hpp"
#include "iol/harness.hpp"
#include "iol/linear_program.hpp"
#include "iol/matching.hpp"
#include "iol/mechanism.hpp"
#include "iol/oracle.hpp"
