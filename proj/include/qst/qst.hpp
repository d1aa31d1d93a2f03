// Umbrella header.
#pragma once

#include "qst/chain.hpp"
#include "qst/disorder.hpp"
#include "qst/dynamics.hpp"
#include "qst/ensemble.hpp"
#include "qst/io.hpp"
#include "qst/schedule.hpp"
