#pragma once

#include "makaro/analysis.hpp"
#include "makaro/cards.hpp"
#include "makaro/deck.hpp"
#include "makaro/enumerate.hpp"
#include "makaro/grid.hpp"
#include "makaro/protocol.hpp"
#include "makaro/puzzle_io.hpp"
#include "makaro/rules.hpp"
#include "makaro/simulator.hpp"
#include "makaro/solver.hpp"
#include "makaro/transcript.hpp"
#include "makaro/trials.hpp"
#include "makaro/zk.hpp"
