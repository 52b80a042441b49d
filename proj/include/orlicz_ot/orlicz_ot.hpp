#pragma once

#include "orlicz_ot/extended.hpp"
#include "orlicz_ot/young.hpp"
#include "orlicz_ot/orlicz.hpp"
#include "orlicz_ot/metric.hpp"
#include "orlicz_ot/measure.hpp"
#include "orlicz_ot/transport.hpp"
#include "orlicz_ot/curves.hpp"
#include "orlicz_ot/geodesics.hpp"
#include "orlicz_ot/parallel.hpp"
#include "orlicz_ot/json_io.hpp"
