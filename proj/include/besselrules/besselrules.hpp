#ifndef BESSELRULES_BESSELRULES_HPP_
#define BESSELRULES_BESSELRULES_HPP_

#include "besselrules/bessel.hpp"
#include "besselrules/coefficients.hpp"
#include "besselrules/dyadic.hpp"
#include "besselrules/errors.hpp"
#include "besselrules/fourier.hpp"
#include "besselrules/io.hpp"
#include "besselrules/oracles.hpp"
#include "besselrules/parallel.hpp"
#include "besselrules/spectroscopy.hpp"
#include "besselrules/sum_rules.hpp"
#include "besselrules/time_domain.hpp"
#include "besselrules/verify.hpp"

#endif  // BESSELRULES_BESSELRULES_HPP_
