#pragma once

#include "error.hpp"
#include "matrix.hpp"
#include "smith.hpp"
#include "model.hpp"
#include "nerve.hpp"
#include "homology.hpp"
#include "polynomial.hpp"
#include "induced_maps.hpp"
#include "fiber.hpp"
#include "set_cover.hpp"
#include "entropy.hpp"
#include "systems.hpp"
#include "scenario.hpp"
#include "verdict.hpp"
#include "reports.hpp"
