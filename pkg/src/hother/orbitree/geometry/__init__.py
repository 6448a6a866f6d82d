"""Finite fields, ambient spaces over F_{2^k}, forms and the OG+ spinor calculus."""
