// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

// Umbrella header for the starseg library: starlet decomposition of
// grayscale images, bright-object segmentation from the detail planes, mask
// evaluation against ground truth, synthetic test data, and the image/report
// codecs the command-line tool speaks.

#include "starseg/error.hpp"
#include "starseg/evaluation.hpp"
#include "starseg/grid.hpp"
#include "starseg/image_io.hpp"
#include "starseg/kernel.hpp"
#include "starseg/report.hpp"
#include "starseg/segmentation.hpp"
#include "starseg/starlet.hpp"
#include "starseg/synth.hpp"
