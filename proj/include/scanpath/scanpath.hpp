#pragma once

#include "scanpath/core.hpp"
#include "scanpath/geometry.hpp"
#include "scanpath/scene.hpp"
#include "scanpath/pgm.hpp"
#include "scanpath/region_geometry.hpp"
#include "scanpath/intra_path.hpp"
#include "scanpath/tour.hpp"
#include "scanpath/scan_path.hpp"
#include "scanpath/servo.hpp"
#include "scanpath/metrics.hpp"
#include "scanpath/config.hpp"
#include "scanpath/scenario.hpp"
