#pragma once

#include "translucent/number.hpp"
#include "translucent/game.hpp"
#include "translucent/dilemmas.hpp"
#include "translucent/beliefs.hpp"
#include "translucent/closed_form.hpp"
#include "translucent/mixed_profile.hpp"
#include "translucent/counterfactual.hpp"
#include "translucent/equilibrium.hpp"
#include "translucent/alt_models.hpp"
#include "translucent/io.hpp"
