// Copyright 2026 The liveredact Authors.
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

#include "liveredact/common.hpp"
#include "liveredact/rng.hpp"
#include "liveredact/config.hpp"
#include "liveredact/audio.hpp"
#include "liveredact/vad.hpp"
#include "liveredact/normalizer.hpp"
#include "liveredact/asr_stream.hpp"
#include "liveredact/nlu.hpp"
#include "liveredact/lar.hpp"
#include "liveredact/bundle.hpp"
#include "liveredact/pipeline.hpp"
#include "liveredact/generator.hpp"
#include "liveredact/eval.hpp"
#include "liveredact/training.hpp"
