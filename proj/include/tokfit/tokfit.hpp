// Copyright 2026 The tokfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "tokfit/analysis.hpp"
#include "tokfit/cli.hpp"
#include "tokfit/config.hpp"
#include "tokfit/curves.hpp"
#include "tokfit/discrepancy.hpp"
#include "tokfit/error.hpp"
#include "tokfit/group_key.hpp"
#include "tokfit/grouping.hpp"
#include "tokfit/ingest.hpp"
#include "tokfit/report.hpp"
#include "tokfit/stats.hpp"
#include "tokfit/synth.hpp"
#include "tokfit/window.hpp"
