#pragma once

#include "opalg/algebra.hpp"
#include "opalg/chsh.hpp"
#include "opalg/embeddings.hpp"
#include "opalg/errors.hpp"
#include "opalg/gns.hpp"
#include "opalg/linalg.hpp"
#include "opalg/separability.hpp"
#include "opalg/serialize.hpp"
#include "opalg/tensor_states.hpp"
