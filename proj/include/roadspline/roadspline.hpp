#pragma once

#include "batch.hpp"
#include "converter.hpp"
#include "error.hpp"
#include "fidelity.hpp"
#include "geometry.hpp"
#include "ingest.hpp"
#include "report_io.hpp"
#include "resim.hpp"
#include "road_network.hpp"
#include "spline.hpp"
#include "validate.hpp"
