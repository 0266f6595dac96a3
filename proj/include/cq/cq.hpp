#ifndef CQ_CQ_HPP
#define CQ_CQ_HPP

#include "cq/algebra.hpp"
#include "cq/curved.hpp"
#include "cq/io.hpp"
#include "cq/linalg.hpp"
#include "cq/poly.hpp"
#include "cq/quantizer.hpp"
#include "cq/random.hpp"
#include "cq/rational.hpp"
#include "cq/signature.hpp"
#include "cq/spectral.hpp"
#include "cq/symbol.hpp"

#endif  // CQ_CQ_HPP
