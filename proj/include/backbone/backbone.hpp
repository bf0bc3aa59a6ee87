#pragma once

#include "backbone/crossing_min.hpp"
#include "backbone/error.hpp"
#include "backbone/generate.hpp"
#include "backbone/geometry.hpp"
#include "backbone/hungarian.hpp"
#include "backbone/io.hpp"
#include "backbone/label_min.hpp"
#include "backbone/length_min.hpp"
#include "backbone/oracle.hpp"
#include "backbone/rational.hpp"
#include "backbone/render.hpp"
#include "backbone/types.hpp"
#include "backbone/verify.hpp"
