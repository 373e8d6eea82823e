#pragma once

#include "ptqm/composite.hpp"
#include "ptqm/dynamics.hpp"
#include "ptqm/error.hpp"
#include "ptqm/frame.hpp"
#include "ptqm/json_io.hpp"
#include "ptqm/linalg.hpp"
#include "ptqm/observable.hpp"
#include "ptqm/open_system.hpp"
#include "ptqm/two_level.hpp"
