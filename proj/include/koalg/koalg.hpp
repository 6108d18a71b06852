#ifndef KOALG_KOALG_HPP
#define KOALG_KOALG_HPP

// Umbrella header for the compositional game engine.

#include "koalg/catalog.hpp"
#include "koalg/choice.hpp"
#include "koalg/equilibrium.hpp"
#include "koalg/errors.hpp"
#include "koalg/game.hpp"
#include "koalg/outcome.hpp"
#include "koalg/process.hpp"
#include "koalg/serialize.hpp"
#include "koalg/space.hpp"
#include "koalg/tree.hpp"
#include "koalg/value.hpp"

#endif  // KOALG_KOALG_HPP
