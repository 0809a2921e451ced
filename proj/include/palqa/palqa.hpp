#pragma once

#include "palqa/error.hpp"
#include "palqa/image.hpp"
#include "palqa/transform.hpp"
#include "palqa/lsbswap.hpp"
#include "palqa/circuit.hpp"
#include "palqa/costmodel.hpp"
#include "palqa/simulator.hpp"
#include "palqa/payload.hpp"
#include "palqa/codec.hpp"
#include "palqa/verify.hpp"
