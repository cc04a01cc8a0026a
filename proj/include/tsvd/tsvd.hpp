#pragma once

#include "tsvd/error.hpp"
#include "tsvd/tensor.hpp"
#include "tsvd/linalg.hpp"
#include "tsvd/rng.hpp"
#include "tsvd/tucker.hpp"
#include "tsvd/ensembles.hpp"
#include "tsvd/hooi.hpp"
#include "tsvd/planted_clique.hpp"
#include "tsvd/io.hpp"
#include "tsvd/experiments.hpp"
