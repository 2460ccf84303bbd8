#ifndef GQSB_GQSB_HPP
#define GQSB_GQSB_HPP

#include "gqsb/error.hpp"
#include "gqsb/signed_graph.hpp"
#include "gqsb/operators.hpp"
#include "gqsb/spectral.hpp"
#include "gqsb/dynamics.hpp"
#include "gqsb/io.hpp"
#include "gqsb/pipeline.hpp"

#endif  // GQSB_GQSB_HPP
