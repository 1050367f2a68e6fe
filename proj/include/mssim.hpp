/*
   Copyright 2026 The mssim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "mssim/ctrw.hpp"
#include "mssim/errors.hpp"
#include "mssim/experiments.hpp"
#include "mssim/inverse_mfpp.hpp"
#include "mssim/mittag_leffler.hpp"
#include "mssim/parallel.hpp"
#include "mssim/ppp_sampler.hpp"
#include "mssim/quadrature.hpp"
#include "mssim/report.hpp"
#include "mssim/rng.hpp"
#include "mssim/special.hpp"
#include "mssim/stability_index.hpp"
#include "mssim/stats.hpp"
#include "mssim/subordinator.hpp"
