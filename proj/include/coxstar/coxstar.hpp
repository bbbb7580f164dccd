#pragma once

#include "coxstar/aut_structure.hpp"
#include "coxstar/automorphism.hpp"
#include "coxstar/dihedral.hpp"
#include "coxstar/general_system.hpp"
#include "coxstar/group_element.hpp"
#include "coxstar/io.hpp"
#include "coxstar/report.hpp"
#include "coxstar/star_system.hpp"
#include "coxstar/tits_oracle.hpp"
#include "coxstar/twist.hpp"
