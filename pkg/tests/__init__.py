"""Tests for the HA Visualiser integration."""