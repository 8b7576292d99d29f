// Copyright 2026 The commnorm Authors
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

#include "commnorm/ensembles.hpp"
#include "commnorm/error.hpp"
#include "commnorm/extremal.hpp"
#include "commnorm/json_io.hpp"
#include "commnorm/matrix.hpp"
#include "commnorm/measures.hpp"
#include "commnorm/norms.hpp"
#include "commnorm/preservers.hpp"
#include "commnorm/reconstruct.hpp"
#include "commnorm/specs.hpp"
#include "commnorm/verify.hpp"
