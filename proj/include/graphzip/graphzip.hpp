// Copyright 2026 The Graphzip Authors
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


// Everything at once. Decoders that only read frames need just frame.hpp.

#pragma once

#include "graphzip/config.hpp"
#include "graphzip/csv.hpp"
#include "graphzip/engine.hpp"
#include "graphzip/frame.hpp"
#include "graphzip/graphs.hpp"
#include "graphzip/profiles.hpp"
#include "graphzip/sddl.hpp"
#include "graphzip/trainer.hpp"
