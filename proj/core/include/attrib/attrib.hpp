// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "attrib/centroid.hpp"
#include "attrib/corpus.hpp"
#include "attrib/distinguishability.hpp"
#include "attrib/errors.hpp"
#include "attrib/eval.hpp"
#include "attrib/holdout.hpp"
#include "attrib/linalg.hpp"
#include "attrib/one_vs_rest.hpp"
#include "attrib/outlier.hpp"
#include "attrib/parallel.hpp"
#include "attrib/rng.hpp"
#include "attrib/stats.hpp"
#include "attrib/synth.hpp"
