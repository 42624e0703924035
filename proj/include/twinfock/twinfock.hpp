#pragma once

#include "twinfock/channels.hpp"
#include "twinfock/distillation.hpp"
#include "twinfock/entropy.hpp"
#include "twinfock/errors.hpp"
#include "twinfock/evolve.hpp"
#include "twinfock/fock_space.hpp"
#include "twinfock/loss_model.hpp"
#include "twinfock/operators.hpp"
#include "twinfock/separable.hpp"
#include "twinfock/serialize.hpp"
#include "twinfock/state.hpp"
#include "twinfock/state_factory.hpp"
#include "twinfock/stokes.hpp"
