#ifndef CUNTZ_CUNTZ_HPP
#define CUNTZ_CUNTZ_HPP

#include "core.hpp"
#include "element.hpp"
#include "endomorphism.hpp"
#include "entropy.hpp"
#include "group.hpp"
#include "masa.hpp"
#include "matrix.hpp"
#include "multiplicative_unitary.hpp"
#include "serialization.hpp"

#endif  // CUNTZ_CUNTZ_HPP
